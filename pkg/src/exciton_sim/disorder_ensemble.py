"""Reproducible Gaussian static-disorder ensembles and spectrum averaging.

Realizations draw from counter-based Philox streams keyed by (seed, index),
so any realization can be generated independently of call order or worker
count. The ensemble mean uses a fixed deterministic reduction over the
realization axis, which makes averaged output bit-identical for any number
of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cavity_response import CavityDrive, ProbeGrid, SpectrumResult, sweep_spectrum
from .errors import InputError, NumericError
from .exciton_model import AggregateSpec, build_basis

MAX_FAILURE_FRACTION = 0.01


@dataclass(frozen=True)
class DisorderModel:
    """Gaussian site-energy disorder: width, realization count, RNG seed."""

    sigma: float
    n_realizations: int
    seed: int

    def __post_init__(self):
        if self.sigma < 0:
            raise InputError(f"sigma must be >= 0, got {self.sigma}")
        if self.n_realizations < 1:
            raise InputError(
                f"n_realizations must be >= 1, got {self.n_realizations}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise InputError("seed must fit in an unsigned 64-bit integer")


def shift_stream(seed: int, index: int) -> np.random.Generator:
    """Independent random stream keyed by (seed, realization index)."""
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Sum over axis 0 with a fixed adjacent-pair tree.

    The topology depends only on the leading length, never on scheduling,
    so ensemble reductions are reproducible bit for bit.
    """
    while values.shape[0] > 1:
        paired = values.shape[0] // 2
        head = values[: 2 * paired]
        values = np.concatenate(
            [head[0::2] + head[1::2], values[2 * paired :]], axis=0
        )
    return values[0]


def sample_realization(model: DisorderModel, n_sites: int, index: int) -> np.ndarray:
    """Site-energy shifts for one realization; identical for identical
    (seed, index, n_sites) regardless of call order."""
    if index >= model.n_realizations:
        raise InputError(
            f"index {index} out of range for {model.n_realizations} realizations"
        )
    rng = shift_stream(model.seed, index)
    return rng.normal(0.0, model.sigma, n_sites)


def average_spectra(
    spec: AggregateSpec,
    drive: CavityDrive,
    grid: ProbeGrid,
    model: DisorderModel,
    gamma: float,
    gamma2: float | None = None,
    workers: int = 1,
) -> SpectrumResult:
    """Ensemble-averaged probe spectrum with pointwise standard error.

    Per-realization solver failures stay NaN gaps; the mean skips them per
    point. More than MAX_FAILURE_FRACTION failed (realization, point) pairs
    aborts the run.
    """
    n_real = model.n_realizations

    def one_realization(index):
        shifts = sample_realization(model, spec.n_sites, index)
        basis = build_basis(spec, shifts)
        result = sweep_spectrum(
            basis, drive, grid, gamma, gamma2, max_failure_fraction=1.0
        )
        return result.chi, len(result.failures)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one_realization, range(n_real)))
    else:
        outcomes = [one_realization(i) for i in range(n_real)]

    # Gather in realization order, then reduce with the fixed pairwise tree
    # so the averaged output is identical for any worker count.
    chi_all = np.array([chi for chi, _ in outcomes], dtype=complex)
    n_failed = sum(count for _, count in outcomes)
    total = n_real * len(grid)
    if n_failed > MAX_FAILURE_FRACTION * total:
        raise NumericError(
            f"{n_failed} of {total} (realization, point) solves failed"
        )

    ok = np.isfinite(chi_all.real) & np.isfinite(chi_all.imag)
    counts = ok.sum(axis=0)
    if np.any(counts == 0):
        raise NumericError("some grid points failed in every realization")
    filled = np.where(ok, chi_all, 0.0 + 0.0j)
    chi_mean = _pairwise_sum(filled) / counts

    if n_real >= 2:
        dev_sq = np.where(ok, (chi_all.imag - chi_mean.imag[None, :]) ** 2, 0.0)
        var = _pairwise_sum(dev_sq) / np.maximum(counts - 1, 1)
        stderr_im = np.sqrt(var / counts)
    else:
        stderr_im = np.zeros_like(chi_mean.real)

    metadata = {
        "seed": model.seed,
        "n_realizations": n_real,
        "sigma": model.sigma,
        "n_failed_points": int(n_failed),
    }
    return SpectrumResult(
        omega_p=grid.omega_p.copy(),
        chi=chi_mean,
        metadata=metadata,
        failures=[],
        stderr_im=stderr_im,
    )
