"""Probe response of polar J-aggregates strongly coupled to a cavity mode.

The package builds disordered Frenkel-exciton chains, solves the
steady-state linear system for the complex probe susceptibility under a
semiclassical cavity drive, carries the closed-form dimer transparency
results and their disorder averages, and validates the solver against an
independent time-domain integrator. The `exciton-sim` CLI reproduces the
bundled figure scenarios as CSV/JSON data files with rendered figures.
"""

__version__ = "0.1.0"

from .cavity_response import (
    CavityDrive,
    DetuningMatrices,
    ProbeGrid,
    SpectrumResult,
    check_sum_rule,
    solve_amplitudes,
    solve_steady_state,
    sweep_spectrum,
)
from .dimer_eit import (
    CauchyWidths,
    DimerParams,
    a_min_cauchy,
    a_min_gaussian_mc,
    a_min_homogeneous,
    chi_dimer,
    dimer_eigens,
)
from .disorder_ensemble import DisorderModel, average_spectra, sample_realization
from .dynamics_oracle import RotatingFrameState, derivative, integrate_to_steady
from .effective_levels import EffectiveParams, build_heff, eigen_tracks
from .errors import (
    ConfigError,
    ConvergenceError,
    ExcitonSimError,
    InputError,
    NumericError,
)
from .exciton_model import (
    AggregateSpec,
    ExcitonBasis,
    build_basis,
    build_site_hamiltonian,
    diagonalize,
    one_to_two_dipoles,
    one_to_two_dipoles_direct,
    scattering_potential,
    transition_dipoles,
)
from .scenarios import bright_pair_cavity_frequency

__all__ = [
    "AggregateSpec",
    "CavityDrive",
    "CauchyWidths",
    "ConfigError",
    "ConvergenceError",
    "DetuningMatrices",
    "DimerParams",
    "DisorderModel",
    "EffectiveParams",
    "ExcitonBasis",
    "ExcitonSimError",
    "InputError",
    "NumericError",
    "ProbeGrid",
    "RotatingFrameState",
    "SpectrumResult",
    "a_min_cauchy",
    "a_min_gaussian_mc",
    "a_min_homogeneous",
    "average_spectra",
    "bright_pair_cavity_frequency",
    "build_basis",
    "build_heff",
    "build_site_hamiltonian",
    "check_sum_rule",
    "chi_dimer",
    "derivative",
    "diagonalize",
    "dimer_eigens",
    "eigen_tracks",
    "integrate_to_steady",
    "one_to_two_dipoles",
    "one_to_two_dipoles_direct",
    "sample_realization",
    "scattering_potential",
    "solve_amplitudes",
    "solve_steady_state",
    "sweep_spectrum",
    "transition_dipoles",
]
