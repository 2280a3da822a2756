"""Four-level effective model of the cavity-dressed band-edge transitions.

A chain ladder of two bright one-exciton states and the two pair states they
share, coupled by the cavity in its rotating frame. Its eigenvalue tracks
versus the dominant coupling explain the peak counts seen in the full
spectra: three resolvable lines at weak dressing, with the middle line
splitting into a doublet as the coupling grows. Setting the last coupling to
zero decouples the highest level, leaving an effective three-level ladder.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class EffectiveParams:
    """Detunings and cavity couplings of the four-level ladder.

    Level order: lowest bright state, its pair state, second bright state,
    the second pair state. Energies are measured from the lowest bright
    state; omega12_minus_c is the pair-state energy in the cavity rotating
    frame.
    """

    omega12_minus_c: float
    delta2: float
    delta23: float
    omega1: float
    omega2: float
    omega3: float


def build_heff(params: EffectiveParams) -> np.ndarray:
    """Real symmetric 4x4 ladder Hamiltonian in the cavity rotating frame."""
    w = params.omega12_minus_c
    return np.array(
        [
            [0.0, params.omega1, 0.0, 0.0],
            [params.omega1, w, params.omega2, 0.0],
            [0.0, params.omega2, params.delta2, params.omega3],
            [0.0, 0.0, params.omega3, w + params.delta23],
        ]
    )


def eigen_tracks(
    params_template: EffectiveParams, omega2_values: np.ndarray
) -> np.ndarray:
    """Sorted eigenvalue tracks versus the dominant coupling omega2.

    The template fixes the detunings and the coupling ratios
    omega1/omega2 and omega3/omega2; each grid point rescales all three
    couplings accordingly. Returns an (n_points, 4) array, eigenvalues
    ascending per row; values are sorted, so crossings stay continuous.
    """
    omega2_values = np.asarray(omega2_values, dtype=float)
    if omega2_values.size == 0:
        raise InputError("omega2 grid must be nonempty")
    if params_template.omega2 == 0.0:
        raise InputError(
            "template omega2 must be nonzero to define the coupling ratios"
        )
    r1 = params_template.omega1 / params_template.omega2
    r3 = params_template.omega3 / params_template.omega2
    tracks = np.empty((omega2_values.size, 4))
    for i, w2 in enumerate(omega2_values):
        p = replace(params_template, omega1=r1 * w2, omega2=w2, omega3=r3 * w2)
        tracks[i] = np.linalg.eigvalsh(build_heff(p))
    return tracks
