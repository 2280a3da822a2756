"""Time-domain integrator for the truncated coherence equations of motion.

This is the independent validation path for the steady-state linear solver:
the same one- and two-exciton coherence dynamics, written in the rotating
frame of the probe (X) and probe-plus-cavity (Y) oscillations and integrated
from the vacuum until the derivative norm drops below tolerance. Both paths
share one decay-rate convention (unhalved coherence rates), so their fixed
points must coincide.

The probe-bilinear source feeding Y is second order in the weak probe and
oscillates in this frame; the steady-state solver omits it. It is available
here behind a flag so its size can be quantified, but equivalence checks run
without it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .cavity_response import CavityDrive
from .errors import ConvergenceError, InputError
from .exciton_model import ExcitonBasis


@dataclass
class RotatingFrameState:
    """One-exciton amplitudes x (N,) and symmetric pair amplitudes y (N, N)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=complex)
        self.y = np.asarray(self.y, dtype=complex)
        n = self.x.shape[0]
        if self.y.shape != (n, n):
            raise InputError(f"y must have shape ({n}, {n})")

    @classmethod
    def zero(cls, n: int) -> "RotatingFrameState":
        return cls(np.zeros(n, dtype=complex), np.zeros((n, n), dtype=complex))

    def max_norm(self) -> float:
        return max(np.abs(self.x).max(), np.abs(self.y).max())


def _pair_rates(basis: ExcitonBasis, drive: CavityDrive, omega_p: float, gamma2: float):
    """Rotating-frame pair rates i*Delta_pq - gamma2 and couplings D."""
    pair_detuning = (
        omega_p
        + drive.omega_c
        - np.add.outer(basis.omega_k, basis.omega_k)
        - 2.0 * basis.u_kp
    )
    d = drive.omega_rabi * basis.mu_two / basis.mu_eg
    return 1j * pair_detuning - gamma2, d


def derivative(
    state: RotatingFrameState,
    basis: ExcitonBasis,
    drive: CavityDrive,
    omega_p: float,
    gamma: float,
    gamma2: float | None = None,
    include_probe_bilinear: bool = False,
) -> RotatingFrameState:
    """Time derivative of the rotating-frame coherences.

    Each unordered pair (p, q) with p != q is one cavity channel: state p
    couples into it with strength D[p, q] (exciton q added on top of p) and
    feeds back to both members. Same-mode pairs carry no coupling, matching
    the channel set of the steady-state solver.
    """
    gamma2 = gamma if gamma2 is None else gamma2
    x, y = state.x, state.y
    rate_y, d = _pair_rates(basis, drive, omega_p, gamma2)

    coupling = d * y
    np.fill_diagonal(coupling, 0.0)
    dx = (1j * (omega_p - basis.omega_k) - gamma) * x - basis.mu_k
    dx = dx + drive.a_c * coupling.sum(axis=1)

    source = d * x[:, None] + d.T * x[None, :]  # D_pq x_p + D_qp x_q
    np.fill_diagonal(source, 0.0)
    dy = rate_y * y - 2.0 * drive.a_c * source
    if include_probe_bilinear:
        dy = dy - (np.add.outer(basis.mu_k * x, basis.mu_k * x))
    return RotatingFrameState(dx, dy)


def probe_bilinear_magnitude(state: RotatingFrameState, basis: ExcitonBasis) -> float:
    """Largest entry of the probe-bilinear pair source for the given state."""
    source = np.add.outer(basis.mu_k * state.x, basis.mu_k * state.x)
    return float(np.abs(source).max())


def steady_pair_amplitudes(
    x: np.ndarray,
    basis: ExcitonBasis,
    drive: CavityDrive,
    omega_p: float,
    gamma2: float,
) -> np.ndarray:
    """Pair amplitudes implied by given one-exciton amplitudes at steady state."""
    rate_y, d = _pair_rates(basis, drive, omega_p, gamma2)
    source = d * x[:, None] + d.T * x[None, :]
    np.fill_diagonal(source, 0.0)
    return 2.0 * drive.a_c * source / rate_y


def integrate_to_steady(
    basis: ExcitonBasis,
    drive: CavityDrive,
    omega_p: float,
    gamma: float,
    gamma2: float | None = None,
    tol: float = 1e-10,
    t_max: float | None = None,
    include_probe_bilinear: bool = False,
    rtol: float = 1e-11,
    atol: float = 1e-13,
) -> RotatingFrameState:
    """Integrate from the vacuum until the derivative max-norm is below tol.

    Raises ConvergenceError (with the residual attached) if t_max elapses
    first. The linearized dynamics decay at least as fast as the slowest
    coherence rate, so convergence is geometric for positive decay rates.
    """
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    gamma2 = gamma if gamma2 is None else gamma2
    slowest = min(gamma, gamma2)
    if t_max is None:
        t_max = 80.0 / slowest

    n = basis.n

    def unpack(vec: np.ndarray) -> RotatingFrameState:
        z = vec.view(complex)
        return RotatingFrameState(z[:n].copy(), z[n:].reshape(n, n).copy())

    def rhs(_t, vec):
        state = unpack(vec)
        dstate = derivative(
            state, basis, drive, omega_p, gamma, gamma2, include_probe_bilinear
        )
        return np.concatenate([dstate.x, dstate.y.ravel()]).view(float)

    state = RotatingFrameState.zero(n)
    vec = np.concatenate([state.x, state.y.ravel()]).view(float)
    t = 0.0
    chunk = 4.0 / slowest

    while True:
        current = unpack(vec)
        res = derivative(
            current, basis, drive, omega_p, gamma, gamma2, include_probe_bilinear
        ).max_norm()
        if res < tol:
            return current
        if t >= t_max:
            raise ConvergenceError(
                f"no steady state within t_max={t_max} (residual {res:.3e})",
                residual=res,
            )
        t_next = min(t + chunk, t_max)
        sol = solve_ivp(
            rhs, (t, t_next), vec, method="DOP853", rtol=rtol, atol=atol,
            dense_output=False,
        )
        if not sol.success:
            raise ConvergenceError(f"integrator failed: {sol.message}", residual=res)
        vec = np.ascontiguousarray(sol.y[:, -1])
        t = t_next
