import numpy as np
import pytest
from helpers import lorentzian_sum

from exciton_sim.cavity_response import (
    CavityDrive,
    ProbeGrid,
    SpectrumResult,
    build_one_photon,
    build_two_photon,
    check_sum_rule,
    detuning_matrices,
    solve_steady_state,
    sweep_spectrum,
)
from exciton_sim.errors import InputError, NumericError
from exciton_sim.exciton_model import AggregateSpec, ExcitonBasis, build_basis
from exciton_sim.scenarios import bright_pair_cavity_frequency

GAMMA = 26.0


def single_resonance_basis(omega=2250.0, mu=1.0):
    """Hand-built one-state basis (a single Lorentzian line)."""
    return ExcitonBasis(
        omega_k=np.array([omega]),
        c=np.eye(1),
        mu_k=np.array([mu]),
        mu_two=np.array([[2.0 * mu]]),
        u_kp=np.zeros((1, 1)),
    )


def reference_setup(n, a_c, omega_rabi=GAMMA):
    basis = build_basis(AggregateSpec(n_sites=n))
    drive = CavityDrive(
        omega_c=bright_pair_cavity_frequency(basis), a_c=a_c, omega_rabi=omega_rabi
    )
    return basis, drive


class TestProbeGrid:
    def test_minimum_two_points(self):
        with pytest.raises(InputError):
            ProbeGrid(np.array([1.0]))

    def test_rejects_decreasing(self):
        with pytest.raises(InputError):
            ProbeGrid(np.array([2.0, 1.0, 3.0]))

    def test_rejects_nonuniform(self):
        with pytest.raises(InputError):
            ProbeGrid(np.array([0.0, 1.0, 3.0]))

    def test_window_constructor(self):
        grid = ProbeGrid.from_window(100.0, 10.0, 21)
        assert len(grid) == 21
        assert grid.spacing == pytest.approx(1.0)


class TestOnePhoton:
    def test_on_resonance(self):
        basis, _ = reference_setup(2, 0.0)
        o = build_one_photon(basis, basis.omega_k[0], GAMMA)
        assert o[0] == pytest.approx(-GAMMA)

    def test_one_linewidth_detuned(self):
        basis, _ = reference_setup(2, 0.0)
        o = build_one_photon(basis, basis.omega_k[1] + GAMMA, GAMMA)
        assert o[1] == pytest.approx(1j * GAMMA - GAMMA)

    def test_zero_damping_limit_is_imaginary(self):
        basis, _ = reference_setup(2, 0.0)
        o = build_one_photon(basis, basis.omega_k[0] + 5.0, 0.0)
        assert o[0].real == 0.0 and o[0].imag == pytest.approx(5.0)


class TestTwoPhoton:
    def test_zero_rabi_gives_zero(self):
        basis = build_basis(AggregateSpec(n_sites=4))
        drive = CavityDrive(omega_c=2000.0, a_c=0.5, omega_rabi=0.0)
        t = build_two_photon(basis, drive, 2100.0, GAMMA)
        np.testing.assert_array_equal(t, np.zeros((4, 4)))

    def test_resonant_channel_is_real_negative(self):
        basis, drive = reference_setup(3, 0.5)
        # put the (0, 1) pair channel exactly on two-photon resonance
        omega_p = (
            basis.omega_k[0] + basis.omega_k[1] + 2 * basis.u_kp[0, 1] - drive.omega_c
        )
        t = build_two_photon(basis, drive, omega_p, GAMMA)
        d01 = drive.omega_rabi * basis.mu_two[0, 1]
        d10 = drive.omega_rabi * basis.mu_two[1, 0]
        assert t[0, 1] == pytest.approx(-d01 * d10 / GAMMA)
        assert t[0, 1].imag == pytest.approx(0.0, abs=1e-12)

    def test_detuning_matrices_cavity_off_matrix_is_diagonal(self):
        basis, _ = reference_setup(3, 0.0)
        dm = detuning_matrices(basis, CavityDrive(2000.0, 0.0, GAMMA), 2100.0, GAMMA)
        m = np.diag(dm.o_diag) + 2.0 * 0.0**2 * dm.t
        np.testing.assert_array_equal(m, np.diag(dm.o_diag))

    def test_entries_finite(self):
        basis, drive = reference_setup(4, 1.0)
        t = build_two_photon(basis, drive, basis.omega_k[0], GAMMA)
        assert np.all(np.isfinite(t))


class TestSolveSteadyState:
    @pytest.mark.parametrize("n", [2, 6, 100])
    def test_cavity_off_matches_lorentzian_sum(self, n):
        basis, drive = reference_setup(n, 0.0)
        w1 = basis.omega_k[0]
        grid = ProbeGrid.from_window(w1, 20 * GAMMA, 501)
        result = sweep_spectrum(basis, drive, grid, GAMMA)
        expected = lorentzian_sum(grid.omega_p, basis.omega_k, basis.mu_k, GAMMA)
        rel = np.abs(result.chi - expected) / np.abs(expected)
        assert rel.max() < 1e-12

    def test_lorentzian_peak_height(self):
        basis = single_resonance_basis(mu=1.3)
        drive = CavityDrive(omega_c=2000.0, a_c=0.0, omega_rabi=GAMMA)
        chi = solve_steady_state(basis, drive, basis.omega_k[0], GAMMA)
        assert chi.imag == pytest.approx(1.3**2 / GAMMA, rel=1e-12)
        assert chi.real == pytest.approx(0.0, abs=1e-15)

    def test_four_peak_window_counts(self):
        # strong dressing carves the single J-band line into four peaks
        from scipy.signal import find_peaks

        basis, drive = reference_setup(100, 0.8)
        w1 = basis.omega_k[0]
        grid = ProbeGrid.from_window(w1, 15 * GAMMA, 1201)
        result = sweep_spectrum(basis, drive, grid, GAMMA)
        peaks, _ = find_peaks(result.absorption, height=0.05 * result.absorption.max())
        assert len(peaks) == 4

    def test_singular_system_raises(self):
        basis, _ = reference_setup(2, 0.0)
        drive = CavityDrive(omega_c=2000.0, a_c=0.0, omega_rabi=GAMMA)
        with pytest.raises(NumericError, match="omega_p"):
            solve_steady_state(basis, drive, float(basis.omega_k[0]), gamma=0.0)


class TestSweep:
    def test_six_site_line_positions(self):
        # six Lorentzians, but only the three odd chain states carry dipole;
        # a narrow linewidth resolves each bright line as a local maximum
        from scipy.signal import find_peaks

        gamma = 5.0
        basis, drive = reference_setup(6, 0.0)
        grid = ProbeGrid.from_window(
            0.5 * (basis.omega_k[0] + basis.omega_k[-1]), 8 * GAMMA, 4001
        )
        result = sweep_spectrum(basis, drive, grid, gamma)
        bright = np.abs(basis.mu_k) > 1e-9
        assert bright.sum() == 3
        # dark states contribute nothing: three bright lines reproduce the sweep
        expected = lorentzian_sum(
            grid.omega_p, basis.omega_k[bright], basis.mu_k[bright], gamma
        )
        np.testing.assert_allclose(result.chi, expected, rtol=1e-12)
        peaks, _ = find_peaks(result.absorption)
        np.testing.assert_allclose(
            grid.omega_p[peaks], basis.omega_k[bright], atol=2 * grid.spacing
        )

    def test_plus_minus_amplitude_invariance(self):
        basis, _ = reference_setup(6, 0.0)
        grid = ProbeGrid.from_window(basis.omega_k[0], 10 * GAMMA, 101)
        omega_c = bright_pair_cavity_frequency(basis)
        plus = sweep_spectrum(
            basis, CavityDrive(omega_c, 0.7, GAMMA), grid, GAMMA
        )
        minus = sweep_spectrum(
            basis, CavityDrive(omega_c, -0.7, GAMMA), grid, GAMMA
        )
        np.testing.assert_array_equal(plus.chi, minus.chi)

    def test_continuity_in_amplitude(self):
        basis, drive = reference_setup(100, 0.8)
        grid = ProbeGrid.from_window(basis.omega_k[0], 15 * GAMMA, 301)
        bumped = CavityDrive(drive.omega_c, 0.8 + 1e-6, drive.omega_rabi)
        a = sweep_spectrum(basis, drive, grid, GAMMA)
        b = sweep_spectrum(basis, bumped, grid, GAMMA)
        assert np.abs(a.chi - b.chi).max() < 1e-3

    def test_monotone_outer_splitting(self):
        from scipy.signal import find_peaks

        basis, _ = reference_setup(100, 0.0)
        omega_c = bright_pair_cavity_frequency(basis)
        grid = ProbeGrid.from_window(basis.omega_k[0], 18 * GAMMA, 1001)
        splittings = []
        for a_c in (0.2, 0.4, 0.6, 0.8):
            res = sweep_spectrum(
                basis, CavityDrive(omega_c, a_c, GAMMA), grid, GAMMA
            )
            pk, _ = find_peaks(res.absorption, height=0.05 * res.absorption.max())
            splittings.append(grid.omega_p[pk[-1]] - grid.omega_p[pk[0]])
        assert all(b > a for a, b in zip(splittings, splittings[1:]))

    def test_worker_invariance(self):
        basis, drive = reference_setup(6, 0.9)
        grid = ProbeGrid.from_window(basis.omega_k[0], 10 * GAMMA, 201)
        serial = sweep_spectrum(basis, drive, grid, GAMMA, workers=1)
        threaded = sweep_spectrum(basis, drive, grid, GAMMA, workers=4)
        np.testing.assert_array_equal(serial.chi, threaded.chi)

    def test_gap_recording_below_threshold(self):
        # zero damping puts one grid point exactly on resonance: a singular
        # solve recorded as a gap, not interpolated
        basis, _ = reference_setup(2, 0.0)
        drive = CavityDrive(omega_c=2000.0, a_c=0.0, omega_rabi=GAMMA)
        w1 = float(basis.omega_k[0])
        grid = ProbeGrid(np.linspace(w1 - 100.0, w1 + 100.0, 201))
        assert np.any(grid.omega_p == w1)
        result = sweep_spectrum(basis, drive, grid, gamma=0.0)
        assert len(result.failures) == 1
        idx, message = result.failures[0]
        assert grid.omega_p[idx] == w1
        assert "omega_p" in message
        assert np.isnan(result.chi[idx].real)
        assert np.all(np.isfinite(np.delete(result.chi, idx)))

    def test_run_level_error_above_threshold(self):
        basis, _ = reference_setup(2, 0.0)
        drive = CavityDrive(omega_c=2000.0, a_c=0.0, omega_rabi=GAMMA)
        w1 = float(basis.omega_k[0])
        grid = ProbeGrid(np.linspace(w1 - 1.0, w1 + 1.0, 3))
        with pytest.raises(NumericError, match="grid points failed"):
            sweep_spectrum(basis, drive, grid, gamma=0.0)

    def test_absorption_is_im_chi(self):
        basis, drive = reference_setup(2, 0.4)
        grid = ProbeGrid.from_window(basis.omega_k[0], 5 * GAMMA, 11)
        result = sweep_spectrum(basis, drive, grid, GAMMA)
        np.testing.assert_array_equal(result.absorption, result.chi.imag)

    def test_metadata_round_trips_through_json(self):
        import json

        basis, drive = reference_setup(2, 0.4)
        grid = ProbeGrid.from_window(basis.omega_k[0], 5 * GAMMA, 11)
        echo = {"n_sites": 2, "a_c": 0.4, "gamma": GAMMA, "grid_points": 11}
        result = sweep_spectrum(basis, drive, grid, GAMMA, metadata={"params": echo})
        assert json.loads(json.dumps(result.metadata))["params"] == echo


class TestSumRule:
    def test_reference_window_six_sites(self):
        basis, drive = reference_setup(6, 0.0)
        grid = ProbeGrid(
            np.linspace(
                basis.omega_k[0] - 60 * GAMMA, basis.omega_k[-1] + 60 * GAMMA, 20001
            )
        )
        result = sweep_spectrum(basis, drive, grid, GAMMA)
        assert check_sum_rule(result, 6) < 1e-2

    def test_preserved_under_dressing(self):
        basis, _ = reference_setup(6, 0.0)
        omega_c = bright_pair_cavity_frequency(basis)
        grid = ProbeGrid(
            np.linspace(
                basis.omega_k[0] - 80 * GAMMA, basis.omega_k[-1] + 80 * GAMMA, 20001
            )
        )
        for a_c in (0.0, 1.0, 2.0):
            res = sweep_spectrum(basis, CavityDrive(omega_c, a_c, GAMMA), grid, GAMMA)
            assert check_sum_rule(res, 6) < 0.02

    def test_single_lorentzian_integrates_to_pi(self):
        basis = single_resonance_basis()
        drive = CavityDrive(omega_c=2000.0, a_c=0.0, omega_rabi=GAMMA)
        grid = ProbeGrid.from_window(basis.omega_k[0], 120 * GAMMA, 20001)
        result = sweep_spectrum(basis, drive, grid, GAMMA)
        assert check_sum_rule(result, 1) < 1e-2

    def test_refuses_narrow_grid(self):
        basis, drive = reference_setup(6, 0.0)
        grid = ProbeGrid.from_window(basis.omega_k[0], 10 * GAMMA, 2001)
        result = sweep_spectrum(basis, drive, grid, GAMMA)
        with pytest.raises(InputError, match="grid too narrow"):
            check_sum_rule(result, 6)

    def test_refuses_gapped_spectrum(self):
        result = SpectrumResult(
            omega_p=np.linspace(0.0, 1.0, 11),
            chi=np.full(11, np.nan + 0j),
        )
        with pytest.raises(InputError):
            check_sum_rule(result, 2)
