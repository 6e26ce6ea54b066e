import math

import numpy as np
import pytest

from polariton_eit import (
    AtsModelParams,
    BaselineParams,
    DegenerateDataError,
    EitModelParams,
    MismatchedDataError,
    ZeroDelayError,
    add_noise,
    aic_weights,
    eval_ln_s21,
    eval_susceptibility,
    fit_model,
    group_delay,
    group_velocity,
    model_group_delay,
    model_spectrum,
    to_angular,
)
from polariton_eit.fitting import FitResult, _jacobian, _residuals

C_LIGHT = 299792458.0
W0 = to_angular(6.4850e9)

BASELINE = BaselineParams(l_eff=0.0103, alpha0=0.25, phi0=0.4)
EIT = EitModelParams(
    a_plus=to_angular(0.08e6), omega_plus=W0, gamma_plus=to_angular(0.12e6),
    a_minus=to_angular(0.9e6), omega_minus=W0 - to_angular(0.05e6),
    gamma_minus=to_angular(1.7e6),
)
ATS = AtsModelParams(
    a1=to_angular(0.45e6), omega1=W0 - to_angular(0.8e6),
    gamma1=to_angular(0.9e6),
    a2=to_angular(0.5e6), omega2=W0 + to_angular(0.8e6),
    gamma2=to_angular(1.0e6),
)
GRID = W0 + np.linspace(-to_angular(5e6), to_angular(5e6), 241)


def fabricate(model, rss, n=482, k=9):
    params = EIT if model == "eit" else ATS
    return FitResult(model=model, params=params, baseline=BASELINE, rss=rss,
                     n_residuals=n, n_free=k, covariance=np.eye(9),
                     stderr=np.ones(9), converged=True, n_evaluations=1,
                     gradient_norm=0.0, omega_range=(float(GRID[0]),
                                                     float(GRID[-1])))


class TestSusceptibility:
    def test_identical_lorentzians_cancel(self):
        p = EitModelParams(a_plus=2.0, omega_plus=10.0, gamma_plus=3.0,
                           a_minus=2.0, omega_minus=10.0, gamma_minus=3.0)
        w = np.linspace(0.0, 20.0, 50)
        np.testing.assert_allclose(eval_susceptibility(p, w), 0.0, atol=1e-15)

    def test_ats_symmetric_doublet_midpoint(self):
        a, g = 2.0, 3.0
        w1, w2 = 8.0, 12.0
        p = AtsModelParams(a1=a, omega1=w1, gamma1=g, a2=a, omega2=w2, gamma2=g)
        mid = 0.5 * (w1 + w2)
        chi = eval_susceptibility(p, mid)
        half_split = 0.5 * (w2 - w1)
        expect_im = 2 * a * (g / 2) / (half_split**2 + g**2 / 4)
        assert chi.real == pytest.approx(0.0, abs=1e-15)
        assert chi.imag == pytest.approx(expect_im, rel=1e-12)

    def test_single_lorentzian_on_resonance(self):
        p = AtsModelParams(a1=2.0, omega1=10.0, gamma1=3.0,
                           a2=0.0, omega2=20.0, gamma2=1.0)
        assert eval_susceptibility(p, 10.0) == pytest.approx(2j * 2.0 / 3.0)

    def test_sign_convention_between_models(self):
        # the narrow plus lobe of the interference model carves a dip in
        # ln|S21|; the minus lobe builds the broad peak
        narrow = EitModelParams(a_plus=EIT.a_plus, omega_plus=EIT.omega_plus,
                                gamma_plus=EIT.gamma_plus, a_minus=0.0,
                                omega_minus=EIT.omega_minus,
                                gamma_minus=EIT.gamma_minus)
        broad = EitModelParams(a_plus=0.0, omega_plus=EIT.omega_plus,
                               gamma_plus=EIT.gamma_plus, a_minus=EIT.a_minus,
                               omega_minus=EIT.omega_minus,
                               gamma_minus=EIT.gamma_minus)
        lm_n, _ = eval_ln_s21(narrow, BASELINE, GRID)
        lm_b, _ = eval_ln_s21(broad, BASELINE, GRID)
        assert lm_n.min() < -BASELINE.alpha0 - 1e-4     # dip below baseline
        assert lm_b.max() > -BASELINE.alpha0 + 1e-3     # peak above baseline

    def test_validation(self):
        with pytest.raises(ValueError):
            EitModelParams(a_plus=-1.0, omega_plus=0, gamma_plus=1,
                           a_minus=0, omega_minus=0, gamma_minus=1)
        with pytest.raises(ValueError):
            AtsModelParams(a1=1.0, omega1=0, gamma1=0.0,
                           a2=0, omega2=0, gamma2=1)
        with pytest.raises(ValueError):
            BaselineParams(l_eff=0.0, alpha0=0, phi0=0)


class TestLnS21:
    def test_empty_line_baseline(self):
        p = EitModelParams(a_plus=0, omega_plus=W0, gamma_plus=1.0,
                           a_minus=0, omega_minus=W0, gamma_minus=1.0)
        ln_mag, phase = eval_ln_s21(p, BASELINE, GRID)
        np.testing.assert_allclose(ln_mag, -BASELINE.alpha0)
        np.testing.assert_allclose(
            phase, GRID * BASELINE.l_eff / C_LIGHT + BASELINE.phi0, rtol=1e-12)

    def test_phase_is_analytic_not_wrapped(self):
        # with a long enough path the propagation term alone passes 2 pi
        # many times over; the model must not reduce it modulo 2 pi
        long_line = BaselineParams(l_eff=0.5, alpha0=0.25, phi0=0.4)
        _, phase = eval_ln_s21(EIT, long_line, GRID)
        # any mod-2pi reduction would fold these into (-pi, pi]
        assert phase.min() > 10 * np.pi

    def test_model_spectrum_consistency(self):
        trace = model_spectrum(EIT, BASELINE, GRID)
        ln_mag, phase = eval_ln_s21(EIT, BASELINE, GRID)
        np.testing.assert_allclose(trace.ln_mag, ln_mag, atol=1e-12)
        np.testing.assert_array_equal(trace.phase, phase)
        np.testing.assert_allclose(np.abs(trace.s21), np.exp(ln_mag))


class TestJacobian:
    @pytest.mark.parametrize("model,params", [("eit", EIT), ("ats", ATS)])
    def test_matches_finite_differences(self, model, params):
        from polariton_eit.fitting import _SIGNS
        signs = _SIGNS[model]
        x = np.array([params.__dict__[f] for f in params.__dataclass_fields__]
                     + [BASELINE.l_eff, BASELINE.alpha0, BASELINE.phi0])
        data = np.zeros(2 * GRID.size)
        jac = _jacobian(x, GRID, data, signs)
        assert jac.shape == (2 * GRID.size, 9)
        steps = 1e-7 * np.maximum(np.abs(x), 1e-3)
        # center frequencies sit at ~4e10 rad/s but the response varies on
        # the linewidth scale; step them by a fraction of their own gamma or
        # the central difference is pure truncation error
        steps[1] = 1e-6 * x[2]
        steps[4] = 1e-6 * x[5]
        for col in range(9):
            h = steps[col]
            xp, xm = x.copy(), x.copy()
            xp[col] += h
            xm[col] -= h
            fd = (_residuals(xp, GRID, data, signs)
                  - _residuals(xm, GRID, data, signs)) / (2 * h)
            scale = max(np.abs(jac[:, col]).max(), 1e-12)
            assert np.abs(jac[:, col] - fd).max() <= 1e-5 * scale


class TestFitRoundTrip:
    def test_eit_noise_free(self):
        trace = model_spectrum(EIT, BASELINE, GRID)
        fit = fit_model(trace, "eit")
        assert fit.converged
        np.testing.assert_allclose(
            fit.free_values,
            [EIT.a_plus, EIT.omega_plus, EIT.gamma_plus, EIT.a_minus,
             EIT.omega_minus, EIT.gamma_minus, BASELINE.l_eff,
             BASELINE.alpha0, BASELINE.phi0], rtol=1e-6)
        assert fit.rss <= 1e-12

    def test_ats_noise_free(self):
        trace = model_spectrum(ATS, BASELINE, GRID)
        fit = fit_model(trace, "ats")
        assert fit.converged
        np.testing.assert_allclose(
            fit.free_values,
            [ATS.a1, ATS.omega1, ATS.gamma1, ATS.a2, ATS.omega2, ATS.gamma2,
             BASELINE.l_eff, BASELINE.alpha0, BASELINE.phi0], rtol=1e-6)

    def test_eit_data_prefers_eit_model(self):
        trace = model_spectrum(EIT, BASELINE, GRID)
        rss_eit = fit_model(trace, "eit").rss
        rss_ats = fit_model(trace, "ats").rss
        assert rss_eit < rss_ats

    def test_noisy_fit_reports_uncertainty(self):
        trace = add_noise(model_spectrum(EIT, BASELINE, GRID),
                         snr_db=30.0, seed=3)
        fit = fit_model(trace, "eit")
        assert fit.covariance.shape == (9, 9)
        assert fit.stderr.shape == (9,)
        assert np.all(fit.stderr > 0)
        assert np.all(np.isfinite(fit.covariance))
        assert fit.n_residuals == 2 * GRID.size
        assert fit.n_free == 9

    def test_flat_trace_degenerate(self):
        trace = model_spectrum(
            EitModelParams(a_plus=0, omega_plus=W0, gamma_plus=1.0,
                           a_minus=0, omega_minus=W0, gamma_minus=1.0),
            BASELINE, GRID)
        with pytest.raises(DegenerateDataError):
            fit_model(trace, "eit")

    def test_short_trace_degenerate(self):
        trace = model_spectrum(EIT, BASELINE, GRID[:20])
        with pytest.raises(DegenerateDataError, match="points"):
            fit_model(trace, "eit")

    def test_unknown_model_rejected(self):
        trace = model_spectrum(EIT, BASELINE, GRID)
        with pytest.raises(ValueError, match="model"):
            fit_model(trace, "lorentz")


class TestAtsCanonical:
    def test_orders_by_center(self):
        swapped = AtsModelParams(a1=ATS.a2, omega1=ATS.omega2, gamma1=ATS.gamma2,
                                 a2=ATS.a1, omega2=ATS.omega1, gamma2=ATS.gamma1)
        canon = swapped.canonical()
        assert canon.omega1 < canon.omega2
        assert canon == ATS.canonical()

    def test_tie_broken_by_amplitude(self):
        p = AtsModelParams(a1=1.0, omega1=5.0, gamma1=1.0,
                           a2=3.0, omega2=5.0, gamma2=2.0)
        canon = p.canonical()
        assert canon.a1 == 3.0

    def test_fit_output_is_canonical(self):
        trace = model_spectrum(ATS, BASELINE, GRID)
        fit = fit_model(trace, "ats")
        assert fit.params.omega1 <= fit.params.omega2


class TestAicWeights:
    def test_equal_fits_split_evenly(self):
        rep = aic_weights([fabricate("eit", 1.0), fabricate("ats", 1.0)])
        np.testing.assert_allclose(rep.weights, [0.5, 0.5], atol=1e-15)
        assert rep.weights.sum() == pytest.approx(1.0, abs=1e-12)

    def test_delta_two(self):
        n = 482
        # choose RSS values so AIC differs by exactly 2
        rss1 = 1.0
        rss2 = rss1 * math.exp(2.0 / n)
        rep = aic_weights([fabricate("eit", rss1), fabricate("ats", rss2)])
        assert rep.delta[1] == pytest.approx(2.0, abs=1e-9)
        assert rep.weights[0] == pytest.approx(0.731059, abs=1e-6)
        assert rep.weights[1] == pytest.approx(0.268941, abs=1e-6)

    def test_lower_aic_gets_larger_weight(self):
        rep = aic_weights([fabricate("eit", 2.0), fabricate("ats", 1.0)])
        assert rep.aic[1] < rep.aic[0]
        assert rep.weights[1] > rep.weights[0]

    def test_mismatched_residual_counts(self):
        with pytest.raises(MismatchedDataError):
            aic_weights([fabricate("eit", 1.0, n=482),
                         fabricate("ats", 1.0, n=400)])

    def test_needs_two_fits(self):
        with pytest.raises(ValueError):
            aic_weights([fabricate("eit", 1.0)])

    def test_small_sample_correction(self):
        n, k = 482, 9
        plain = aic_weights([fabricate("eit", 1.0), fabricate("ats", 2.0)])
        corr = aic_weights([fabricate("eit", 1.0), fabricate("ats", 2.0)],
                           corrected=True)
        bump = 2 * k * (k + 1) / (n - k - 1)
        np.testing.assert_allclose(corr.aic, plain.aic + bump, rtol=1e-12)
        assert corr.corrected

    def test_correction_guard(self):
        with pytest.raises(ValueError, match="small-sample"):
            aic_weights([fabricate("eit", 1.0, n=10),
                         fabricate("ats", 1.0, n=10)], corrected=True)


class TestGroupDelay:
    def test_baseline_only_constant(self):
        p = EitModelParams(a_plus=0, omega_plus=W0, gamma_plus=1.0,
                           a_minus=0, omega_minus=W0, gamma_minus=1.0)
        tau = model_group_delay(p, BASELINE, GRID)
        np.testing.assert_allclose(tau, -BASELINE.l_eff / C_LIGHT, rtol=1e-12)

    def test_matches_finite_difference(self):
        h = 1e-6 * min(EIT.gamma_plus, EIT.gamma_minus)
        tau = model_group_delay(EIT, BASELINE, GRID)
        _, up = eval_ln_s21(EIT, BASELINE, GRID + h)
        _, dn = eval_ln_s21(EIT, BASELINE, GRID - h)
        fd = -(up - dn) / ((GRID + h) - (GRID - h))
        assert np.abs(tau - fd).max() <= 1e-6 * np.abs(tau).max()

    def test_delegates_from_fit_result(self):
        fit = fabricate("eit", 1.0)
        np.testing.assert_array_equal(group_delay(fit, GRID),
                                      model_group_delay(EIT, BASELINE, GRID))

    def test_negative_at_window_center(self):
        tau = model_group_delay(EIT, BASELINE, np.array([EIT.omega_plus]))
        assert tau[0] < 0


class TestGroupVelocity:
    def test_paper_numbers(self):
        assert group_velocity(-19.8e-6, 10.3e-3) == pytest.approx(-520.2, abs=0.1)

    def test_baseline_delay_gives_light_speed(self):
        length = 0.0103
        assert group_velocity(length / C_LIGHT, length) == pytest.approx(C_LIGHT)

    def test_sign_follows_delay(self):
        assert group_velocity(2e-6, 0.01) > 0
        assert group_velocity(-2e-6, 0.01) < 0

    def test_zero_delay_raises(self):
        with pytest.raises(ZeroDelayError):
            group_velocity(0.0, 0.01)

    def test_length_validated(self):
        with pytest.raises(ValueError, match="length"):
            group_velocity(1e-6, 0.0)
