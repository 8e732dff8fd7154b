import warnings

import numpy as np
import pytest

from ionchain import (
    EquispacedLogPotential,
    GaussianBeam,
    HarmonicPotential,
    TabulatedBeam,
    ThermalState,
    YB171,
    curvature_ratio,
    decay_parameters,
    find_equilibrium,
    in_phase_theta,
    normal_modes,
    rabi_at,
    rabi_trace,
    rabi_trace_monte_carlo,
    single_ion_modes,
    theta_profile_gaussian,
    zero_point_spread,
)
from ionchain.errors import DomainError, InputError, LowOccupancyWarning

WAIST = 870e-9
OMEGA_140 = 2 * np.pi * 140e3


def quiet_state(nbar):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LowOccupancyWarning)
        return ThermalState(nbar)


# ----------------------------------------------------------------------
# beams
# ----------------------------------------------------------------------

class TestBeams:
    def test_gaussian_center_curvature(self):
        beam = GaussianBeam(peak_rabi=1.0, center=0.0, waist=WAIST)
        assert curvature_ratio(beam, 0.0) == pytest.approx(-2.0 / WAIST**2, rel=1e-12)

    def test_gaussian_inflection_zero(self):
        beam = GaussianBeam(peak_rabi=1.0, center=0.3e-6, waist=WAIST)
        x = 0.3e-6 + WAIST / np.sqrt(2.0)
        assert abs(curvature_ratio(beam, x)) < 1e-6 / WAIST**2

    def test_gaussian_amplitude_profile(self):
        beam = GaussianBeam(peak_rabi=2.0, center=0.0, waist=WAIST)
        assert rabi_at(beam, WAIST) == pytest.approx(2.0 * np.exp(-1.0), rel=1e-12)

    def test_tabulated_matches_analytic(self):
        x = np.linspace(-2.5 * WAIST, 2.5 * WAIST, 501)
        gauss = GaussianBeam(peak_rabi=1.0, center=0.0, waist=WAIST)
        tab = TabulatedBeam(x, gauss.rabi_at(x))
        probe = np.array([0.0, 0.3, -0.3, 1.0, -1.0, 1.5]) * WAIST
        assert np.allclose(tab.rabi_at(probe), gauss.rabi_at(probe), rtol=1e-4)
        assert np.allclose(
            tab.curvature_ratio(probe), gauss.curvature_ratio(probe), rtol=1e-4
        )

    def test_tabulated_domain_errors(self):
        x = np.linspace(0.0, 1.0, 11)
        tab = TabulatedBeam(x, np.exp(-x))
        with pytest.raises(DomainError):
            tab.rabi_at(1.2)
        with pytest.raises(DomainError):
            tab.curvature_ratio(0.05)  # inside range but outside interior

    def test_tabulated_validation(self):
        with pytest.raises(InputError):
            TabulatedBeam([0, 1, 2], [1, 1, 1])  # too few points
        with pytest.raises(InputError):
            TabulatedBeam([0, 1, 1, 2], [1, 1, 1, 1])  # not strictly increasing
        with pytest.raises(InputError):
            GaussianBeam(peak_rabi=1.0, center=0.0, waist=0.0)


# ----------------------------------------------------------------------
# zero-point spread and thermal state
# ----------------------------------------------------------------------

class TestZeroPointSpread:
    def test_yb171_100khz_value(self):
        xi = zero_point_spread(YB171, 2 * np.pi * 100e3)
        assert abs(xi - 17e-9) / 17e-9 < 0.03

    def test_square_root_law(self):
        xi1 = zero_point_spread(YB171, OMEGA_140)
        xi4 = zero_point_spread(YB171, 4 * OMEGA_140)
        assert xi4 == pytest.approx(xi1 / 2.0, rel=1e-12)

    def test_hand_computed_140khz(self):
        # independent arithmetic: hbar = 1.054571817e-34, M = 170.9363302 u,
        # u = 1.66053906660e-27 kg, omega = 2 pi 140 kHz
        mass = 170.9363302 * 1.66053906660e-27
        expected = (1.054571817e-34 / (2.0 * mass * 2.0 * np.pi * 140e3)) ** 0.5
        assert zero_point_spread(YB171, OMEGA_140) == pytest.approx(expected, rel=1e-12)

    def test_low_occupancy_warning(self):
        with pytest.warns(LowOccupancyWarning):
            ThermalState([5.0])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            ThermalState([280.0])  # no warning

    def test_thermal_state_validation(self):
        with pytest.raises(InputError):
            quiet_state([-1.0])

    def test_from_temperature(self):
        from ionchain.constants import HBAR, KB

        modes = single_ion_modes(YB171, OMEGA_140)
        state = ThermalState.from_temperature(modes, 1e-3)
        assert state.nbar[0] == pytest.approx(KB * 1e-3 / (HBAR * OMEGA_140), rel=1e-12)


# ----------------------------------------------------------------------
# decay parameters
# ----------------------------------------------------------------------

class TestDecayParameters:
    def test_zero_occupancy_gives_zero(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        theta = decay_parameters(modes, quiet_state([0.0]), {0: beam}, [0.0])
        assert theta[0, 0] == 0.0

    def test_single_ion_two_route_agreement(self):
        # route 1: the general matrix; route 2: 2 (xi/w)^2 nbar closed form
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        theta = decay_parameters(modes, ThermalState([280.0]), {0: beam}, [0.0])
        xi = zero_point_spread(YB171, OMEGA_140)
        expected = 2.0 * (xi / WAIST) ** 2 * 280.0
        assert theta[0, 0] == pytest.approx(expected, rel=1e-12)
        assert theta[0, 0] > 0

    def test_ion_at_inflection_point_zero(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        theta = decay_parameters(
            modes, ThermalState([280.0]), {0: beam}, [WAIST / np.sqrt(2.0)]
        )
        assert abs(theta[0, 0]) < 1e-12

    def test_unaddressed_ions_zero_rows(self):
        chain = find_equilibrium(YB171, EquispacedLogPotential(5, 4.4e-6))
        modes = normal_modes(chain)
        beam = GaussianBeam(1.0, chain.positions[2], WAIST)
        theta = decay_parameters(
            modes, ThermalState(np.full(5, 100.0)), {2: beam}, chain.positions
        )
        assert np.all(theta[[0, 1, 3, 4], :] == 0.0)
        assert np.any(theta[2, :] != 0.0)

    def test_linear_in_occupancy(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        one = decay_parameters(modes, ThermalState([150.0]), {0: beam}, [0.0])
        two = decay_parameters(modes, ThermalState([300.0]), {0: beam}, [0.0])
        assert np.allclose(two, 2.0 * one, rtol=1e-14)

    def test_sign_positive_inside_concave_region(self, rng):
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        for _ in range(25):
            x = rng.uniform(-0.999, 0.999) * WAIST / np.sqrt(2.0)
            theta = decay_parameters(modes, ThermalState([50.0]), {0: beam}, [x])
            assert theta[0, 0] > 0

    def test_dimension_checks(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        with pytest.raises(InputError):
            decay_parameters(modes, ThermalState([100.0]), {0: beam}, [0.0, 1.0])
        with pytest.raises(InputError):
            decay_parameters(modes, ThermalState([100.0]), {3: beam}, [0.0])

    def test_tabulated_beam_route_matches_gaussian(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        gauss = GaussianBeam(1.0, 0.0, WAIST)
        x = np.linspace(-2.5 * WAIST, 2.5 * WAIST, 501)
        tab = TabulatedBeam(x, gauss.rabi_at(x))
        via_gauss = decay_parameters(modes, ThermalState([280.0]), {0: gauss}, [0.0])
        via_tab = decay_parameters(modes, ThermalState([280.0]), {0: tab}, [0.0])
        assert via_tab[0, 0] == pytest.approx(via_gauss[0, 0], rel=1e-4)


class TestThetaProfile:
    def test_center_value(self):
        xi = zero_point_spread(YB171, OMEGA_140)
        theta = theta_profile_gaussian(0.0, WAIST, xi, 280.0)
        assert theta == pytest.approx(2.0 * (xi / WAIST) ** 2 * 280.0, rel=1e-14)

    def test_zero_crossings_at_inflection(self):
        xi = zero_point_spread(YB171, OMEGA_140)
        x = WAIST / np.sqrt(2.0)
        center = theta_profile_gaussian(0.0, WAIST, xi, 280.0)
        assert abs(theta_profile_gaussian(x, WAIST, xi, 280.0)) < 1e-15 * center
        assert abs(theta_profile_gaussian(-x, WAIST, xi, 280.0)) < 1e-15 * center

    def test_matches_decay_parameters_route(self):
        xi = zero_point_spread(YB171, OMEGA_140)
        modes = single_ion_modes(YB171, OMEGA_140)
        beam = GaussianBeam(1.0, 0.0, WAIST)
        xs = np.linspace(-1.4e-6, 1.4e-6, 31)
        profile = theta_profile_gaussian(xs, WAIST, xi, 280.0)
        matrix_route = np.array(
            [
                decay_parameters(modes, ThermalState([280.0]), {0: beam}, [x])[0, 0]
                for x in xs
            ]
        )
        assert np.max(np.abs(profile - matrix_route)) < 1e-12 * np.max(np.abs(profile))


# ----------------------------------------------------------------------
# Rabi traces
# ----------------------------------------------------------------------

class TestRabiTrace:
    def test_undamped_limit(self):
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 100e-6, 57)
        trace = rabi_trace(omega0, [0.0], t)
        assert np.allclose(trace.p1, np.sin(0.5 * omega0 * t) ** 2, atol=1e-14)
        assert np.all(trace.contrast == 1.0)
        assert np.all(trace.phase == 0.0)

    def test_starts_at_zero(self):
        trace = rabi_trace(2 * np.pi * 50e3, [0.3, -0.1], [0.0])
        assert trace.p1[0] == 0.0

    def test_single_mode_unit_argument(self):
        omega0 = 2 * np.pi * 50e3
        theta = 0.1
        t = 1.0 / (omega0 * theta)  # theta * omega0 * t = 1
        trace = rabi_trace(omega0, [theta], [t])
        assert trace.contrast[0] == pytest.approx(2.0**-0.5, rel=1e-12)
        assert trace.phase[0] == pytest.approx(np.pi / 4.0, rel=1e-12)
        expected = 0.5 * (1.0 - np.cos(omega0 * t - np.pi / 4.0) / np.sqrt(2.0))
        assert trace.p1[0] == pytest.approx(expected, rel=1e-12)

    def test_population_bounds_random_thetas(self, rng):
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 300e-6, 400)
        for _ in range(20):
            thetas = rng.uniform(-0.5, 0.5, size=rng.integers(1, 5))
            trace = rabi_trace(omega0, thetas, t)
            assert np.all(trace.p1 >= 0.0) and np.all(trace.p1 <= 1.0)
            assert np.all(trace.contrast > 0.0) and np.all(trace.contrast <= 1.0)
            assert np.all(np.diff(trace.contrast) <= 1e-15)

    def test_phase_asymptote(self):
        omega0 = 2 * np.pi * 50e3
        thetas = [0.2, -0.05, 0.1]
        trace = rabi_trace(omega0, thetas, [1000.0])  # enormous t
        expected = sum(np.sign(th) for th in thetas) * np.pi / 2.0
        assert trace.phase[0] == pytest.approx(expected, rel=1e-7)

    def test_negative_times_rejected(self):
        with pytest.raises(InputError):
            rabi_trace(1.0, [0.1], [-1.0])


class TestRabiTraceMonteCarlo:
    def test_zero_theta_exact(self):
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 60e-6, 31)
        mc = rabi_trace_monte_carlo(omega0, [0.0], t, n_samples=100, seed=1)
        assert np.allclose(mc.p1, np.sin(0.5 * omega0 * t) ** 2, atol=1e-14)
        assert np.all(mc.stderr < 1e-14)

    def test_seed_reproducibility(self):
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 60e-6, 13)
        a = rabi_trace_monte_carlo(omega0, [0.07], t, n_samples=2000, seed=42)
        b = rabi_trace_monte_carlo(omega0, [0.07], t, n_samples=2000, seed=42)
        assert np.array_equal(a.p1, b.p1)
        assert np.array_equal(a.stderr, b.stderr)
        c = rabi_trace_monte_carlo(omega0, [0.07], t, n_samples=2000, seed=43)
        assert not np.array_equal(a.p1, c.p1)

    def test_closed_form_agreement_single_mode(self):
        omega0 = 2 * np.pi * 50e3
        t_max = 20 * np.pi / omega0
        t = np.linspace(0.0, t_max, 201)
        closed = rabi_trace(omega0, [0.05], t)
        mc = rabi_trace_monte_carlo(omega0, [0.05], t, n_samples=100_000, seed=7)
        assert np.max(np.abs(closed.p1 - mc.p1)) < 5e-3

    def test_closed_form_agreement_multimode(self):
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 15 * np.pi / omega0, 151)
        thetas = [0.08, -0.03, 0.02]
        closed = rabi_trace(omega0, thetas, t)
        mc = rabi_trace_monte_carlo(omega0, thetas, t, n_samples=100_000, seed=9)
        assert np.max(np.abs(closed.p1 - mc.p1)) < 5e-3

    def test_closed_form_agreement_random_theta_lists(self, rng):
        # property: agreement holds for arbitrary mode lists in the
        # |theta * omega0 * t| <= 10 envelope, at 1e5 samples
        omega0 = 2 * np.pi * 50e3
        for trial in range(3):
            n_modes = int(rng.integers(1, 5))
            thetas = rng.uniform(-0.25, 0.25, n_modes)
            t_max = 10.0 / (omega0 * max(np.max(np.abs(thetas)), 1e-3))
            t = np.linspace(0.0, min(t_max, 30 * np.pi / omega0), 101)
            closed = rabi_trace(omega0, thetas, t)
            mc = rabi_trace_monte_carlo(omega0, thetas, t, 100_000, seed=500 + trial)
            assert np.max(np.abs(closed.p1 - mc.p1)) < 5e-3


# ----------------------------------------------------------------------
# in-phase mode reduction
# ----------------------------------------------------------------------

class TestInPhaseTheta:
    def test_harmonic_chain_identity(self):
        modes = normal_modes(find_equilibrium(YB171, HarmonicPotential(OMEGA_140), 10))
        theta = in_phase_theta(modes, 0.156)
        assert np.allclose(theta, 0.156, rtol=1e-12)

    def test_single_ion_identity(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        assert in_phase_theta(modes, 0.2)[0] == pytest.approx(0.2, rel=1e-15)

    def test_equispaced_chain_middle_enhanced(self):
        modes = normal_modes(find_equilibrium(YB171, EquispacedLogPotential(15, 4.4e-6)))
        theta = in_phase_theta(modes, 0.1)
        mid = 7
        assert theta[mid] == np.max(theta)
        assert theta[0] < theta[mid]
        assert theta[14] < theta[mid]
        b0 = modes.participation[:, 0]
        expected = b0**2 * b0.sum() ** 2 * 0.1
        assert np.allclose(theta, expected, rtol=1e-14)

    def test_addressed_subset(self):
        modes = normal_modes(find_equilibrium(YB171, HarmonicPotential(OMEGA_140), 5))
        theta = in_phase_theta(modes, 0.1, addressed=[1, 3])
        assert theta[0] == 0.0 and theta[2] == 0.0 and theta[4] == 0.0
        assert theta[1] > 0.0 and theta[3] > 0.0

    def test_addressed_bounds_checked(self):
        modes = single_ion_modes(YB171, OMEGA_140)
        with pytest.raises(InputError):
            in_phase_theta(modes, 0.1, addressed=[2])
