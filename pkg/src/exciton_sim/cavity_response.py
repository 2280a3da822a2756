"""Steady-state probe susceptibility of a cavity-dressed aggregate.

The probe response follows from a complex linear system per probe frequency:
a diagonal one-photon block (probe detuning and decay per exciton state) plus
a dense two-photon block fed by the cavity amplitude, which couples every
one-exciton coherence to the two-exciton band. Absorption is Im(chi) in this
package's sign convention, which makes the integrated absorption N*pi.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.linalg import lapack

from .errors import InputError, NumericError
from .exciton_model import ExcitonBasis

# Refuse solves whose estimated condition number exceeds this.
COND_LIMIT = 1e12

# A sweep with more than this fraction of failed grid points is a failed run.
MAX_FAILURE_FRACTION = 0.01

# Sum-rule windows must decay to this fraction of the peak at both edges.
BOUNDARY_FACTOR = 1e-3


@dataclass(frozen=True)
class CavityDrive:
    """Semiclassical cavity drive.

    a_c is the mean cavity amplitude |<a>|; the response depends on it only
    through a_c**2, so negative values are accepted and act like |a_c|.
    omega_rabi is the vacuum Rabi frequency scaling all one- to two-exciton
    couplings.
    """

    omega_c: float
    a_c: float
    omega_rabi: float

    def __post_init__(self):
        if self.omega_rabi < 0:
            raise InputError(f"omega_rabi must be >= 0, got {self.omega_rabi}")


@dataclass(frozen=True)
class ProbeGrid:
    """Uniform, strictly increasing probe-frequency grid (meV)."""

    omega_p: np.ndarray

    def __post_init__(self):
        omega_p = np.asarray(self.omega_p, dtype=float)
        object.__setattr__(self, "omega_p", omega_p)
        if omega_p.ndim != 1 or omega_p.size < 2:
            raise InputError("probe grid needs at least 2 points")
        steps = np.diff(omega_p)
        if np.any(steps <= 0):
            raise InputError("probe grid must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise InputError("probe grid must be uniformly spaced")

    @classmethod
    def from_window(cls, center: float, half_width: float, n_points: int) -> "ProbeGrid":
        return cls(np.linspace(center - half_width, center + half_width, n_points))

    @property
    def spacing(self) -> float:
        return float(self.omega_p[1] - self.omega_p[0])

    def __len__(self):
        return self.omega_p.size


@dataclass
class SpectrumResult:
    """Probe sweep output: complex susceptibility per grid point.

    Failed grid points are NaN gaps listed in `failures` as (index, reason).
    For ensemble averages `stderr_im` holds the pointwise standard error of
    the absorption.
    """

    omega_p: np.ndarray
    chi: np.ndarray
    metadata: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    stderr_im: np.ndarray | None = None

    @property
    def absorption(self) -> np.ndarray:
        return self.chi.imag


@dataclass(frozen=True)
class DetuningMatrices:
    """One-photon diagonal and two-photon matrix at a single probe frequency."""

    o_diag: np.ndarray
    t: np.ndarray


def build_one_photon(basis: ExcitonBasis, omega_p_point: float, gamma: float) -> np.ndarray:
    """Diagonal one-photon block: i*(omega_p - omega_k) - gamma per state."""
    return 1j * (omega_p_point - basis.omega_k) - gamma


class _TwoPhotonKernel:
    """Static parts of the two-photon block, reusable across grid points."""

    def __init__(self, basis: ExcitonBasis, drive: CavityDrive, gamma2: float):
        self.gamma2 = gamma2
        self.d = drive.omega_rabi * basis.mu_two / basis.mu_eg
        # Pair detuning minus omega_p: add the probe frequency per grid point.
        self.pair_base = (
            drive.omega_c
            - np.add.outer(basis.omega_k, basis.omega_k)
            - 2.0 * basis.u_kp
        )
        self.cross = self.d * self.d.T  # D_nm * D_mn
        self.d_sq = self.d * self.d

    def at(self, omega_p_point: float) -> np.ndarray:
        den = 1.0 / (1j * (self.pair_base + omega_p_point) - self.gamma2)
        t = self.cross * den
        per_channel = self.d_sq * den
        diag = per_channel.sum(axis=1) - np.diagonal(per_channel)  # exclude j = n
        t[np.diag_indices_from(t)] = diag
        return t


def build_two_photon(
    basis: ExcitonBasis, drive: CavityDrive, omega_p_point: float, gamma2: float
) -> np.ndarray:
    """Dense two-photon block: pair-channel couplings over pair detunings.

    Diagonal entries sum D_nj**2 over partner states j != n; off-diagonal
    entries carry the product D_nm * D_mn, all over i*Delta_nm - gamma2 with
    Delta_nm = omega_p + omega_c - omega_n - omega_m - 2*u_kp[n, m].
    """
    t = _TwoPhotonKernel(basis, drive, gamma2).at(omega_p_point)
    if not np.all(np.isfinite(t)):
        raise NumericError(
            f"two-photon block has non-finite entries at omega_p={omega_p_point}"
        )
    return t


def detuning_matrices(
    basis: ExcitonBasis,
    drive: CavityDrive,
    omega_p_point: float,
    gamma: float,
    gamma2: float | None = None,
) -> DetuningMatrices:
    gamma2 = gamma if gamma2 is None else gamma2
    return DetuningMatrices(
        o_diag=build_one_photon(basis, omega_p_point, gamma),
        t=build_two_photon(basis, drive, omega_p_point, gamma2),
    )


def _solve_checked(m: np.ndarray, b: np.ndarray, omega_p_point: float) -> np.ndarray:
    """Dense LU solve with a reciprocal-condition estimate."""
    anorm = np.linalg.norm(m, 1)
    lu, piv, info = lapack.zgetrf(m)
    if info > 0:
        raise NumericError(f"singular system matrix at omega_p={omega_p_point}")
    if info < 0:
        raise NumericError(f"LU factorization failed (info={info})")
    rcond, _ = lapack.zgecon(lu, anorm, norm="1")
    if not np.isfinite(rcond) or rcond < 1.0 / COND_LIMIT:
        raise NumericError(
            f"ill-conditioned system matrix at omega_p={omega_p_point} "
            f"(rcond={rcond:.3e})"
        )
    x, info = lapack.zgetrs(lu, piv, b)
    if info != 0:
        raise NumericError(f"back substitution failed (info={info})")
    return x


def _point_amplitudes(
    basis: ExcitonBasis,
    kernel: _TwoPhotonKernel,
    a_c: float,
    omega_p_point: float,
    gamma: float,
) -> np.ndarray:
    o_diag = build_one_photon(basis, omega_p_point, gamma)
    m = (2.0 * a_c * a_c) * kernel.at(omega_p_point)
    m[np.diag_indices_from(m)] += o_diag
    return _solve_checked(m, basis.mu_k.astype(complex), omega_p_point)


def solve_amplitudes(
    basis: ExcitonBasis,
    drive: CavityDrive,
    omega_p_point: float,
    gamma: float,
    gamma2: float | None = None,
) -> np.ndarray:
    """One-exciton coherence amplitudes X at a single probe frequency."""
    gamma2 = gamma if gamma2 is None else gamma2
    kernel = _TwoPhotonKernel(basis, drive, gamma2)
    return _point_amplitudes(basis, kernel, drive.a_c, omega_p_point, gamma)


def solve_steady_state(
    basis: ExcitonBasis,
    drive: CavityDrive,
    omega_p_point: float,
    gamma: float,
    gamma2: float | None = None,
) -> complex:
    """Complex probe susceptibility at a single probe frequency.

    chi = sum_k mu_k X_k / i with unit probe amplitude; with a_c = 0 this is
    the bare Lorentzian sum over the exciton lines.
    """
    x = solve_amplitudes(basis, drive, omega_p_point, gamma, gamma2)
    return complex((basis.mu_k @ x) / 1j)


def sweep_spectrum(
    basis: ExcitonBasis,
    drive: CavityDrive,
    grid: ProbeGrid,
    gamma: float,
    gamma2: float | None = None,
    workers: int = 1,
    max_failure_fraction: float = MAX_FAILURE_FRACTION,
    metadata: dict | None = None,
) -> SpectrumResult:
    """Probe spectrum over a frequency grid.

    Grid points whose solve fails are recorded as NaN gaps with a diagnostic;
    more than `max_failure_fraction` failed points aborts the run. Points are
    independent, so they may be solved concurrently; results are assembled in
    grid order regardless of worker count.
    """
    gamma2 = gamma if gamma2 is None else gamma2
    kernel = _TwoPhotonKernel(basis, drive, gamma2)
    omega_p = grid.omega_p

    def one_point(w):
        try:
            x = _point_amplitudes(basis, kernel, drive.a_c, w, gamma)
            return complex((basis.mu_k @ x) / 1j), None
        except NumericError as exc:
            return complex(np.nan, np.nan), str(exc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one_point, omega_p))
    else:
        outcomes = [one_point(w) for w in omega_p]

    chi = np.array([c for c, _ in outcomes], dtype=complex)
    failures = [(i, msg) for i, (_, msg) in enumerate(outcomes) if msg is not None]
    if len(failures) > max_failure_fraction * len(omega_p):
        raise NumericError(
            f"{len(failures)} of {len(omega_p)} grid points failed "
            f"(first: {failures[0][1]})"
        )

    meta: dict[str, Any] = {"seed": None, "n_realizations": 1}
    if metadata:
        meta.update(metadata)
    return SpectrumResult(omega_p=omega_p.copy(), chi=chi, metadata=meta, failures=failures)


def check_sum_rule(
    result: SpectrumResult, n_sites: int, boundary_factor: float = BOUNDARY_FACTOR
) -> float:
    """Relative deviation of the integrated absorption from N*pi.

    Requires a uniform grid wide enough that the absorption at both edges has
    decayed below `boundary_factor` times its peak; refuses otherwise so a
    truncated integral is never reported as a sum-rule violation.
    """
    omega_p = np.asarray(result.omega_p, dtype=float)
    steps = np.diff(omega_p)
    if omega_p.size < 2 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise InputError("sum rule check needs a uniform grid")
    im = result.chi.imag
    if not np.all(np.isfinite(im)):
        raise InputError("spectrum contains gaps; cannot integrate")
    peak = float(np.max(np.abs(im)))
    edge = max(abs(im[0]), abs(im[-1]))
    if peak == 0.0 or edge >= boundary_factor * peak:
        raise InputError(
            f"grid too narrow: edge absorption {edge:.3e} vs peak {peak:.3e}"
        )
    target = n_sites * np.pi
    integral = float(np.trapezoid(im, omega_p))
    return abs(integral - target) / target
