"""Disordered Frenkel-exciton chains: Hamiltonian assembly, eigenbasis, dipoles.

All energies are in meV with hbar = 1. Site transition dipoles are parallel,
so a single scalar mu_eg fixes every dipole matrix element (the angular factor
is absorbed into the quoted couplings). Site-energy shifts model static
disorder; an all-zero shift vector is the homogeneous chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericError

COUPLING_RANGES = ("nearest_neighbor", "full_dipole")

# Absolute threshold below which a column sum counts as zero when fixing
# eigenvector signs. Rounding noise in orthonormal columns sits near 1e-14.
_SIGN_TOL = 1e-9


@dataclass(frozen=True)
class AggregateSpec:
    """Microscopic parameters of a linear polar J-aggregate."""

    n_sites: int
    omega_e: float = 2250.0  # gas-phase site transition energy (meV)
    j_nn: float = -68.2      # nearest-neighbour exchange coupling (meV)
    u_nn: float = -198.0     # nearest-neighbour permanent-dipole coupling (meV)
    coupling_range: str = "nearest_neighbor"
    gamma: float = 26.0      # one-exciton coherence decay rate (meV)
    mu_eg: float = 1.0       # single-molecule transition dipole (dimensionless)

    def __post_init__(self):
        if self.n_sites < 2:
            raise InputError(f"n_sites must be >= 2, got {self.n_sites}")
        if self.gamma <= 0:
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if self.coupling_range not in COUPLING_RANGES:
            raise InputError(
                f"coupling_range must be one of {COUPLING_RANGES}, "
                f"got {self.coupling_range!r}"
            )


@dataclass(frozen=True)
class ExcitonBasis:
    """One-exciton eigenbasis and every basis-contracted quantity used downstream.

    omega_k : (N,) eigenenergies, ascending (meV)
    c       : (N, N) orthogonal matrix, c[i, k] = site-i amplitude of state k
    mu_k    : (N,) ground to one-exciton transition dipoles
    mu_two  : (N, N) one- to two-exciton dipoles, entry (k, q) for the pair (k, q)
    u_kp    : (N, N) symmetric exciton-basis scattering potential (meV)
    """

    omega_k: np.ndarray
    c: np.ndarray
    mu_k: np.ndarray
    mu_two: np.ndarray
    u_kp: np.ndarray
    mu_eg: float = 1.0

    def __post_init__(self):
        n = self.omega_k.shape[0]
        for name in ("c", "mu_two", "u_kp"):
            if getattr(self, name).shape != (n, n):
                raise InputError(f"{name} must have shape ({n}, {n})")
        if self.mu_k.shape != (n,):
            raise InputError(f"mu_k must have shape ({n},)")

    @property
    def n(self) -> int:
        return self.omega_k.shape[0]


def _coupling_matrix(n: int, strength: float, coupling_range: str) -> np.ndarray:
    """Site-basis coupling matrix for parallel dipoles on a uniform chain."""
    dist = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :]).astype(float)
    out = np.zeros((n, n))
    if coupling_range == "nearest_neighbor":
        out[dist == 1.0] = strength
    elif coupling_range == "full_dipole":
        mask = dist >= 1.0
        out[mask] = strength / dist[mask] ** 3
    else:
        raise InputError(f"unknown coupling_range {coupling_range!r}")
    return out


def build_site_hamiltonian(spec: AggregateSpec, shifts: np.ndarray) -> np.ndarray:
    """Site-basis exciton Hamiltonian: shifted site energies plus exchange couplings."""
    shifts = np.asarray(shifts, dtype=float)
    if shifts.shape != (spec.n_sites,):
        raise InputError(
            f"shifts must have length {spec.n_sites}, got shape {shifts.shape}"
        )
    h = _coupling_matrix(spec.n_sites, spec.j_nn, spec.coupling_range)
    h[np.diag_indices(spec.n_sites)] = spec.omega_e + shifts
    return h


def _fix_signs(c: np.ndarray) -> np.ndarray:
    """Deterministic eigenvector sign convention: nonnegative coefficient sum.

    Columns whose sum is zero (within tolerance) keep their first
    non-negligible entry positive instead.
    """
    sums = c.sum(axis=0)
    flips = np.where(np.abs(sums) > _SIGN_TOL, np.sign(sums), 0.0)
    for k in np.flatnonzero(flips == 0.0):
        col = c[:, k]
        nz = np.flatnonzero(np.abs(col) > _SIGN_TOL)
        flips[k] = np.sign(col[nz[0]]) if nz.size else 1.0
    return c * flips


def diagonalize(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and sign-fixed orthonormal eigenvectors of a
    real symmetric matrix."""
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InputError(f"expected a square matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.T)) > 1e-12:
        raise InputError("matrix is not symmetric within 1e-12")
    try:
        omega_k, c = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver did not converge: {exc}") from exc
    return omega_k, _fix_signs(c)


def transition_dipoles(c: np.ndarray, mu_eg: float = 1.0) -> np.ndarray:
    """Ground to one-exciton dipoles for parallel site dipoles: mu_eg * column sums."""
    return mu_eg * np.asarray(c).sum(axis=0)


def one_to_two_dipoles(c: np.ndarray, mu_eg: float = 1.0) -> np.ndarray:
    """One- to two-exciton dipoles in the product-state approximation.

    For orthonormal coefficients the double-sum matrix element collapses to
    mu_two[k, q] = mu_q + delta_kq * mu_k (adding exciton q to state k).
    """
    mu = transition_dipoles(c, mu_eg)
    out = np.tile(mu, (mu.shape[0], 1))
    out[np.diag_indices(mu.shape[0])] = 2.0 * mu
    return out


def one_to_two_dipoles_direct(c: np.ndarray, mu_eg: float = 1.0) -> np.ndarray:
    """Same matrix elements evaluated from the raw double sum over site pairs.

    Kept as an independent cross-check of the simplified form; quartic cost,
    only suitable for small chains.
    """
    c = np.asarray(c, dtype=float)
    term1 = np.einsum("ik,jk,iq->kq", c, c, c, optimize=True)
    term2 = np.einsum("ik,ik,jq->kq", c, c, c, optimize=True)
    return mu_eg * (term1 + term2)


def scattering_potential(c: np.ndarray, spec: AggregateSpec) -> np.ndarray:
    """Exciton-basis two-exciton band shift from the permanent-dipole couplings.

    Contracts squared coefficient moduli only (no coherent exchange terms):
    u_kp = sum_ij U_ij |c_ik|^2 |c_jp|^2, with U built by the same range rule
    as the exchange coupling and zero on-site terms.
    """
    c = np.asarray(c, dtype=float)
    u_site = _coupling_matrix(spec.n_sites, spec.u_nn, spec.coupling_range)
    w = c * c
    u_kp = w.T @ u_site @ w
    return 0.5 * (u_kp + u_kp.T)  # exact symmetry


def build_basis(spec: AggregateSpec, shifts: np.ndarray | None = None) -> ExcitonBasis:
    """Diagonalize one disorder realization and collect all derived quantities."""
    if shifts is None:
        shifts = np.zeros(spec.n_sites)
    h = build_site_hamiltonian(spec, shifts)
    omega_k, c = diagonalize(h)
    return ExcitonBasis(
        omega_k=omega_k,
        c=c,
        mu_k=transition_dipoles(c, spec.mu_eg),
        mu_two=one_to_two_dipoles(c, spec.mu_eg),
        u_kp=scattering_potential(c, spec),
        mu_eg=spec.mu_eg,
    )
