import numpy as np
import pytest

from ionchain import (
    DataSeries,
    binomial_sigma,
    fit_beam_profile,
    fit_least_squares,
    fit_rabi_trace,
    fit_theta_growth,
    fit_theta_power_law,
)
from ionchain.fitting import damped_rabi_model, gaussian_beam_model, theta_rate_power_model
from ionchain.errors import FitError, InputError


class TestCore:
    def test_noiseless_line_recovered_exactly(self):
        x = np.linspace(0.0, 5.0, 9)
        y = 0.7 * x - 1.3
        result = fit_least_squares(
            lambda p, xx: p[0] * xx + p[1], DataSeries(x, y), guess=[1.0, 0.0]
        )
        assert result.params == pytest.approx([0.7, -1.3], abs=1e-9)

    def test_noisy_quadratic_within_three_sigma(self, rng):
        x = np.linspace(-2.0, 2.0, 41)
        truth = np.array([0.8, -0.4, 1.1])
        y = truth[0] * x**2 + truth[1] * x + truth[2] + rng.normal(0, 0.01, x.size)
        result = fit_least_squares(
            lambda p, xx: p[0] * xx**2 + p[1] * xx + p[2],
            DataSeries(x, y, np.full(x.size, 0.01)),
            guess=[1.0, 0.0, 1.0],
        )
        assert np.all(np.abs(result.params - truth) < 3.0 * result.uncertainties)
        assert 0.3 < result.reduced_chisq < 2.5

    def test_underdetermined_rejected(self):
        with pytest.raises(FitError):
            fit_least_squares(
                lambda p, xx: p[0] * xx + p[1],
                DataSeries(np.array([1.0]), np.array([2.0])),
                guess=[1.0, 0.0],
            )

    def test_data_series_validation(self):
        with pytest.raises(InputError):
            DataSeries(np.array([1.0, 2.0]), np.array([1.0]))
        with pytest.raises(InputError):
            DataSeries(np.array([1.0, np.inf]), np.array([1.0, 2.0]))
        with pytest.raises(InputError):
            DataSeries(np.array([1.0, 2.0]), np.array([1.0, 2.0]), np.array([1.0, 0.0]))

    def test_order_independence(self, rng):
        x = np.linspace(0.0, 3.0, 25)
        y = 2.0 * np.exp(-((x - 1.4) ** 2) / 0.49) + rng.normal(0, 0.01, x.size)
        forward = fit_beam_profile(x, y)
        perm = rng.permutation(x.size)
        shuffled = fit_beam_profile(x[perm], y[perm])
        assert np.allclose(forward.params, shuffled.params, rtol=1e-8)

    def test_binomial_sigma_floor(self):
        s = binomial_sigma(np.array([0.0, 0.5, 1.0]), 200)
        assert s[0] == pytest.approx(1.0 / 202)
        assert s[2] == pytest.approx(1.0 / 202)
        assert s[1] == pytest.approx(np.sqrt(0.25 / 200))


class TestBeamProfile:
    def test_noiseless_round_trip(self):
        x = np.linspace(-2.0, 2.0, 41)  # micrometers
        y = gaussian_beam_model([1.3, 0.07, 0.87], x)
        result = fit_beam_profile(x, y)
        assert result["waist"] == pytest.approx(0.87, rel=1e-3 * 0.1)
        assert result["center"] == pytest.approx(0.07, abs=1e-6)
        assert result["amplitude"] == pytest.approx(1.3, rel=1e-6)

    def test_noisy_recovery(self, rng):
        x = np.linspace(-2.2, 2.2, 45)
        y = gaussian_beam_model([1.0, 0.0, 0.87], x) + rng.normal(0, 0.02, x.size)
        result = fit_beam_profile(x, y, sigma=np.full(x.size, 0.02))
        assert abs(result["waist"] - 0.87) < 3.0 * result.uncertainty("waist")
        assert result.uncertainty("waist") < 0.025

    def test_shoulder_biases_waist_and_flags_structure(self):
        x = np.linspace(-2.5, 2.5, 81)
        clean = gaussian_beam_model([1.0, 0.0, 0.87], x)
        shoulder = 0.12 * np.exp(-((x - 1.1) ** 2) / 0.3**2)
        result = fit_beam_profile(x, clean + shoulder)
        assert result["waist"] > 0.87  # pulled wide by the shoulder
        assert "residual_structure" in result.flags

    def test_flat_data_rejected(self):
        x = np.linspace(-1.0, 1.0, 21)
        with pytest.raises(FitError):
            fit_beam_profile(x, np.full(x.size, 0.8))

    def test_too_few_points_rejected(self):
        with pytest.raises(FitError):
            fit_beam_profile(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0, 1.0]))


class TestRabiTraceFit:
    def make_trace(self, omega0, theta, rng=None, shots=None):
        t = np.linspace(0.0, 120e-6, 240)
        p1 = damped_rabi_model([omega0, theta], t)
        if shots is not None:
            p1 = rng.binomial(shots, np.clip(p1, 0, 1)) / shots
        return t, p1

    def test_noiseless_round_trip(self):
        omega0 = 2 * np.pi * 50e3
        t, p1 = self.make_trace(omega0, 0.08)
        result = fit_rabi_trace(t, p1)
        assert result["rabi_frequency"] == pytest.approx(omega0, rel=1e-9)
        assert result["theta"] == pytest.approx(0.08, rel=1e-7)

    def test_binomial_noise_recovery(self, rng):
        omega0 = 2 * np.pi * 50e3
        t, p1 = self.make_trace(omega0, 0.08, rng=rng, shots=200)
        result = fit_rabi_trace(t, p1, n_shots=200)
        assert abs(result["theta"] - 0.08) < 3.0 * result.uncertainty("theta")
        assert abs(result["rabi_frequency"] - omega0) < 3.0 * result.uncertainty(
            "rabi_frequency"
        )

    def test_zero_theta_flagged(self, rng):
        omega0 = 2 * np.pi * 50e3
        t, p1 = self.make_trace(omega0, 0.0, rng=rng, shots=2000)
        result = fit_rabi_trace(t, p1, n_shots=2000)
        assert "theta_consistent_with_zero" in result.flags
        assert abs(result["rabi_frequency"] - omega0) < 5 * result.uncertainty(
            "rabi_frequency"
        )

    def test_discriminates_exponential_phase_damping(self, rng):
        # data from a constant-phase exponentially damped oscillation: the
        # algebraic-contrast model with its growing phase lag fits worse than
        # the matched damping model
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 120e-6, 240)
        gamma = 2.0e4
        p_damped = 0.5 * (1.0 - np.exp(-gamma * t) * np.cos(omega0 * t))
        noise = rng.normal(0, 0.01, t.size)
        y = p_damped + noise
        sigma = np.full(t.size, 0.01)

        thermal_fit = fit_rabi_trace(t, y, sigma=sigma)

        def damping_model(params, tt):
            om, g = params
            return 0.5 * (1.0 - np.exp(-g * tt) * np.cos(om * tt))

        matched_fit = fit_least_squares(
            damping_model,
            DataSeries(t, y, sigma),
            guess=[omega0, 1.5e4],
            param_names=("rabi_frequency", "gamma"),
        )
        assert thermal_fit.reduced_chisq > 2.0 * matched_fit.reduced_chisq

    def test_short_trace_rejected(self):
        t = np.linspace(0.0, 10e-6, 30)  # half a period at 50 kHz
        p1 = damped_rabi_model([2 * np.pi * 50e3, 0.05], t)
        with pytest.raises(FitError):
            fit_rabi_trace(t, p1)

    def test_multimode_option(self):
        omega0 = 2 * np.pi * 50e3
        t = np.linspace(0.0, 120e-6, 240)
        p1 = damped_rabi_model([omega0, 0.06, 0.03], t)
        result = fit_rabi_trace(t, p1, n_modes=2)
        assert result.param_names == ("rabi_frequency", "theta_0", "theta_1")
        fitted = sorted(result.params[1:])
        assert fitted == pytest.approx([0.03, 0.06], abs=1e-6)


class TestThetaGrowth:
    def test_two_points_exact(self):
        result = fit_theta_growth(np.array([0.0, 2.0]), np.array([0.1, 0.5]))
        assert result["intercept"] == pytest.approx(0.1, abs=1e-14)
        assert result["slope"] == pytest.approx(0.2, abs=1e-14)

    def test_noisy_recovery(self, rng):
        t = np.linspace(0.0, 10e-3, 12)
        theta = 0.02 + 11.0 * t + rng.normal(0, 0.003, t.size)
        result = fit_theta_growth(t, theta, sigma=np.full(t.size, 0.003))
        assert abs(result["slope"] - 11.0) < 3.0 * result.uncertainty("slope")

    def test_negative_slope_flagged(self):
        result = fit_theta_growth(np.array([0.0, 1.0, 2.0]), np.array([0.5, 0.4, 0.3]))
        assert result["slope"] < 0
        assert "negative_slope" in result.flags

    def test_single_point_rejected(self):
        with pytest.raises(FitError):
            fit_theta_growth(np.array([1.0]), np.array([0.1]))


class TestThetaPowerLaw:
    def test_noiseless_round_trip(self):
        omega = 2 * np.pi * np.geomspace(80e3, 1000e3, 10)
        truth = (22.0 * (2 * np.pi * 140e3) ** 2.8, 0.8, 0.9)
        rates = theta_rate_power_model(truth, omega)
        result = fit_theta_power_law(omega, rates)
        assert result["alpha"] == pytest.approx(0.8, abs=1e-6)
        assert result["offset"] == pytest.approx(0.9, rel=1e-5)

    def test_noisy_recovery_alpha(self, rng):
        omega = 2 * np.pi * np.geomspace(100e3, 1200e3, 12)
        rates = theta_rate_power_model((22.0 * (2 * np.pi * 140e3) ** 2.8, 0.8, 0.9), omega)
        sigma = 0.08 * rates
        noisy = rates + rng.normal(0, sigma)
        result = fit_theta_power_law(omega, noisy, sigma)
        assert abs(result["alpha"] - 0.8) < 3.0 * result.uncertainty("alpha")
        assert result.uncertainty("alpha") < 0.2

    def test_zero_offset_consistent(self):
        omega = 2 * np.pi * np.geomspace(80e3, 1000e3, 10)
        rates = theta_rate_power_model((22.0 * (2 * np.pi * 140e3) ** 3, 1.0, 0.0), omega)
        result = fit_theta_power_law(omega, rates)
        assert abs(result["offset"]) <= max(result.uncertainty("offset"), 1e-6)

    def test_zero_amplitude_degenerate(self):
        omega = 2 * np.pi * np.geomspace(80e3, 1000e3, 8)
        rates = np.full(omega.size, 0.9)
        try:
            result = fit_theta_power_law(omega, rates)
        except FitError:
            return
        assert "degenerate_covariance" in result.flags

    def test_too_few_points(self):
        with pytest.raises(FitError):
            fit_theta_power_law(
                2 * np.pi * np.array([1e5, 2e5, 4e5]), np.array([3.0, 2.0, 1.0])
            )
