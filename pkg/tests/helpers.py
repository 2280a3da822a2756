"""Closed-form oracles and small fitting utilities shared by the test suite."""

import numpy as np


def open_chain_eigensystem(n, omega_e=2250.0, j=-68.2):
    """Analytic eigenpairs of the homogeneous open chain with nearest-neighbour
    coupling: energies omega_e + 2 j cos(k pi / (n+1)) and sine eigenvectors."""
    k = np.arange(1, n + 1)
    energies = omega_e + 2.0 * j * np.cos(k * np.pi / (n + 1))
    i = np.arange(1, n + 1)
    vectors = np.sqrt(2.0 / (n + 1)) * np.sin(np.outer(i, k) * np.pi / (n + 1))
    order = np.argsort(energies, kind="stable")
    return energies[order], vectors[:, order]


def lorentzian_sum(omega_p, omega_k, mu_k, gamma):
    """Cavity-free susceptibility: one Lorentzian per exciton line."""
    delta = np.asarray(omega_p, dtype=float)[..., None] - np.asarray(omega_k)
    terms = (np.asarray(mu_k) ** 2) * (-delta + 1j * gamma) / (delta**2 + gamma**2)
    return terms.sum(axis=-1)


def fit_through_origin(x, y):
    """Least-squares slope through the origin and its R^2 (about zero)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope = float(x @ y) / float(x @ x)
    ss_res = float(np.sum((y - slope * x) ** 2))
    ss_tot = float(np.sum(y**2))
    return slope, 1.0 - ss_res / ss_tot


def fit_line(x, y):
    """Ordinary least-squares line fit returning (slope, intercept, R^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return float(slope), float(intercept), 1.0 - ss_res / ss_tot


def quartic_ladder_eigenvalues(omega1, omega2, omega3):
    """Closed-form eigenvalues of the zero-diagonal four-level ladder.

    The characteristic polynomial is biquadratic:
    lam^4 - (w1^2 + w2^2 + w3^2) lam^2 + w1^2 w3^2 = 0.
    """
    s = omega1**2 + omega2**2 + omega3**2
    disc = np.sqrt(s**2 - 4.0 * omega1**2 * omega3**2)
    lam_sq_hi = 0.5 * (s + disc)
    lam_sq_lo = 0.5 * (s - disc)
    roots = np.array(
        [
            -np.sqrt(lam_sq_hi),
            -np.sqrt(lam_sq_lo),
            np.sqrt(lam_sq_lo),
            np.sqrt(lam_sq_hi),
        ]
    )
    return roots
