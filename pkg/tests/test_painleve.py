import math

import numpy as np
import pytest

from mkdv_selfsim.painleve import (
    EnvelopeFit,
    PainleveConfig,
    PhysicalProfile,
    _env_model,
    _integrate_with_defect,
    envelope_fit,
    integrate_profile,
    profile_from_csv,
    profile_to_csv,
    rho_of_kappa,
    rho_of_kappa_rescaled,
    theta_candidate,
)
from mkdv_selfsim.specfun import airy


@pytest.fixture(scope="module")
def prof03():
    return integrate_profile(PainleveConfig(kappa=0.3))


class TestRhoOfKappa:
    def test_zero(self):
        assert rho_of_kappa(0.0) == 0.0
        assert rho_of_kappa_rescaled(0.0) == 0.0

    def test_formula_values(self):
        assert rho_of_kappa(0.3) == pytest.approx(
            math.log(1.0 / 0.91) / (2.0 * math.pi), abs=1e-15
        )
        assert rho_of_kappa(0.3) == pytest.approx(0.01501003, abs=1e-7)
        # (the value 0.6243 quoted elsewhere for kappa = 0.99 transposes the
        # true digits; see project notes)
        assert rho_of_kappa(0.99) == pytest.approx(0.6234150, abs=1e-6)

    def test_rescaled_is_about_half(self):
        for k in (0.1, 0.3, 0.5):
            ratio = rho_of_kappa_rescaled(k) / rho_of_kappa(k)
            assert 0.45 < ratio < 0.52

    def test_domain(self):
        for bad in (1.0, -1.0, 1.5):
            with pytest.raises(ValueError):
                rho_of_kappa(bad)
            with pytest.raises(ValueError):
                rho_of_kappa_rescaled(bad)

    def test_even_in_kappa(self):
        assert rho_of_kappa(-0.4) == rho_of_kappa(0.4)


class TestThetaCandidate:
    def test_finite_and_wrapped(self):
        t = theta_candidate(0.015, +1.0)
        assert math.isfinite(t) and -math.pi <= t <= math.pi

    def test_sign_dependence(self):
        rho = 0.0075
        tp = theta_candidate(rho, +1.0)
        tm = theta_candidate(rho, -1.0)
        diff = math.remainder(tp - tm, 2.0 * math.pi)
        assert abs(abs(diff) - math.pi) < 1e-12

    def test_requires_positive_rho(self):
        with pytest.raises(ValueError):
            theta_candidate(0.0, 1.0)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            PainleveConfig(kappa=1.0)
        with pytest.raises(ValueError):
            PainleveConfig(kappa=0.3, y_start=5.0)
        with pytest.raises(ValueError):
            PainleveConfig(kappa=0.3, y_end=-40.0)
        with pytest.raises(ValueError):
            PainleveConfig(kappa=0.3, epsilon=0)
        with pytest.raises(ValueError):
            PainleveConfig(kappa=0.3, rk_tol=0.0)


class TestIntegrateProfile:
    def test_zero_kappa(self):
        p = integrate_profile(PainleveConfig(kappa=0.0))
        assert np.all(p.vs == 0.0) and np.all(p.dvs == 0.0)

    def test_airy_seed_ratio(self):
        # V ~ kappa Ai at large y; the correction is doubly-exponentially
        # smaller, so the ratio at y = 6 recovers kappa to 1e-6
        p = integrate_profile(PainleveConfig(kappa=0.1))
        j = int(np.argmin(np.abs(p.ys - 6.0)))
        assert p.ys[j] == pytest.approx(6.0, abs=1e-12)
        assert p.vs[j] / airy(6.0).ai == pytest.approx(0.1, abs=1e-6)

    def test_bounded_oscillatory(self, prof03):
        assert np.max(np.abs(prof03.vs)) < 1.0

    def test_checkpoint_spacing(self, prof03):
        steps = -np.diff(prof03.ys)
        assert np.max(steps) <= 0.05 + 1e-12
        assert prof03.ys[0] == 8.0 and prof03.ys[-1] == -60.0

    def test_ode_defect_within_budget(self):
        cfg = PainleveConfig(kappa=0.3)
        _, defect, scale = _integrate_with_defect(cfg)
        assert np.all(defect <= 10.0 * cfg.rk_tol * scale)

    def test_tolerance_halving(self):
        # halving rk_tol moves V(-40) by less than 10x the smaller tolerance
        def v40(tol):
            p = integrate_profile(PainleveConfig(kappa=0.3, rk_tol=tol))
            j = int(np.argmin(np.abs(p.ys + 40.0)))
            return p.vs[j]

        tol = 1e-9
        assert abs(v40(tol) - v40(tol / 2)) < 10.0 * (tol / 2)

    def test_odd_symmetry(self, prof03):
        pm = integrate_profile(PainleveConfig(kappa=-0.3))
        assert np.allclose(pm.vs, -prof03.vs, atol=1e-12)


class TestEnvelopeFit:
    def test_synthetic_exact_model(self):
        ys = np.linspace(-30.0, -55.0, 1400)
        rho, theta = 0.015, 1.0
        vs = _env_model(ys, rho, theta)
        ay = np.abs(ys)
        phase = (2.0 / (3.0 * math.sqrt(3.0))) * ay**1.5 - 1.5 * rho * np.log(
            ay
        ) + theta
        # analytic derivative of the model (sign: d|y|/dy = -1 here)
        damp = 2.0 * math.sqrt(rho) * 0.25 * (3.0 * ay) ** -1.25 * 3.0
        dphase = -(math.sqrt(3.0) / 2.0) * ay**0.5 + 1.5 * rho / ay
        env = 2.0 * math.sqrt(rho) / (3.0 * ay) ** 0.25
        dvs = damp * np.cos(phase) + env * np.sin(phase) * dphase
        fit = envelope_fit(PhysicalProfile(ys=ys, vs=vs, dvs=dvs), (-55.0, -30.0))
        assert fit.rho == pytest.approx(rho, abs=1e-6)
        assert fit.theta == pytest.approx(theta, abs=1e-6)

    def test_kappa_03_matches_rescaled_formula(self, prof03):
        fit = envelope_fit(prof03, (-55.0, -30.0))
        target = rho_of_kappa_rescaled(0.3)
        assert abs(fit.rho - target) / target < 0.02
        assert fit.residual <= 0.05 * (
            2.0 * math.sqrt(fit.rho) / (3.0 * 40.0) ** 0.25
        )

    def test_parity_in_kappa(self, prof03):
        fit_p = envelope_fit(prof03)
        fit_m = envelope_fit(integrate_profile(PainleveConfig(kappa=-0.3)))
        assert fit_m.rho == pytest.approx(fit_p.rho, rel=1e-9)

    def test_window_validation(self, prof03):
        with pytest.raises(ValueError):
            envelope_fit(prof03, (-30.0, -10.0))  # too close to origin
        with pytest.raises(ValueError):
            envelope_fit(prof03, (-80.0, -30.0))  # past integrated range
        with pytest.raises(ValueError):
            envelope_fit(prof03, (-27.0, -21.0))  # < 10 periods

    def test_zero_profile_rejected(self):
        p = integrate_profile(PainleveConfig(kappa=0.0))
        with pytest.raises(ValueError):
            envelope_fit(p)

    def test_returns_dataclass(self, prof03):
        fit = envelope_fit(prof03)
        assert isinstance(fit, EnvelopeFit)
        assert fit.window == (-55.0, -30.0)
        assert -math.pi <= fit.theta <= math.pi


class TestSerialization:
    def test_round_trip(self, prof03):
        text = profile_to_csv(prof03)
        back = profile_from_csv(text)
        assert np.array_equal(back.ys, prof03.ys)
        assert np.array_equal(back.vs, prof03.vs)
        assert np.array_equal(back.dvs, prof03.dvs)
        assert text.splitlines()[0] == "y,v,dv"
