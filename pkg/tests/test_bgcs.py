import math

import numpy as np
import pytest

from su11squeeze import bgcs
from su11squeeze.bgcs import (
    BgcsParams,
    bgcs_moments0,
    bgcs_strong_coupling_window,
    bgcs_transport,
    bgcs_variances,
    bgcs_variances_strong,
    bgcs_variances_weak,
    bgcs_zero_intensity_factors,
    zero_intensity_factors_exact,
)
from su11squeeze.hamiltonian import CouplingParams, coefficients
from su11squeeze.pcs import PAPER, TRANSPORT

T0 = coefficients(CouplingParams(1.0, 0.0), 0.0)
FIG7 = coefficients(CouplingParams(3.0, 1.0), 0.5 * math.pi)
PHI = np.linspace(0.0, 2.0 * np.pi, 201)


class TestParams:
    def test_z(self):
        assert BgcsParams(2.0, 1.0).z == pytest.approx(2.0 * complex(math.cos(1.0), math.sin(1.0)))

    @pytest.mark.parametrize("zmag, k", [(-1.0, 0.5), (1.0, 0.2), (math.nan, 0.5)])
    def test_rejects(self, zmag, k):
        with pytest.raises(ValueError):
            BgcsParams(zmag, 0.0, k)

    def test_quarter_index_allowed(self):
        # 2k - 1 = -1/2 is a legitimate non-integer order
        rep = bgcs_variances(BgcsParams(1.5, 0.3, 0.25), coefficients(CouplingParams(3.0, 1.0), 0.4))
        assert math.isfinite(rep.f_x) and math.isfinite(rep.f_y)


class TestMoments0:
    def test_vacuum(self):
        s = bgcs_moments0(BgcsParams(0.0, 0.0, 0.5))
        np.testing.assert_allclose(s.mean, [0.0, 0.0, 0.5])
        assert s.var_x == s.var_y == 0.25

    def test_eigenvalue_means(self):
        s = bgcs_moments0(BgcsParams(2.0, 0.0, 0.5))
        assert s.mean[0] == pytest.approx(2.0)
        assert s.mean[1] == pytest.approx(0.0, abs=1e-15)
        s = bgcs_moments0(BgcsParams(2.0, 1.0, 0.5))
        assert s.mean[1] == pytest.approx(-2.0 * math.sin(1.0))

    @pytest.mark.parametrize("k", [0.25, 0.5, 1.0, 2.0])
    @pytest.mark.parametrize("zmag", [0.0, 1e-3, 0.7, 5.0, 200.0])
    def test_minimum_uncertainty(self, k, zmag):
        s = bgcs_moments0(BgcsParams(zmag, 2.1, k))
        assert s.var_x == pytest.approx(0.5 * s.mean_kz, rel=1e-10)
        assert s.var_y == pytest.approx(0.5 * s.mean_kz, rel=1e-10)
        assert s.cov[2, 2] >= 0.0

    @pytest.mark.parametrize("path", [bgcs_variances, bgcs_transport, bgcs_variances_weak, bgcs_variances_strong])
    def test_no_squeezing_at_t0(self, path):
        for zmag in (0.0, 0.3, 2.0):
            rep = path(BgcsParams(zmag, 0.9, 0.5), T0)
            assert rep.f_x == pytest.approx(0.0, abs=1e-10)
            assert rep.f_y == pytest.approx(0.0, abs=1e-10)

    def test_weight_broadcasts(self):
        z = np.array([[0.0, 1.0], [1.0, 300.0]])
        w = bgcs.bessel_weight(z, 0.5)
        assert w.shape == z.shape
        assert w[0, 1] == w[1, 0] == pytest.approx(0.6977746579640081, rel=1e-14)
        assert bgcs.bessel_weight(1.0, 0.25) == pytest.approx(math.tanh(2.0), rel=1e-14)


class TestVariances:
    def test_tags(self):
        p = BgcsParams(1.0, 0.0)
        assert bgcs_variances(p, T0).path == PAPER
        assert bgcs_transport(p, T0).path == TRANSPORT
        assert bgcs_variances_weak(p, T0).path == "weak"
        assert bgcs_variances_strong(p, T0).path == "strong"

    def test_unknown_route(self):
        with pytest.raises(ValueError):
            bgcs.factors(1.0, 0.0, 0.5, T0, "oracle")

    def test_k_dependence(self):
        c = coefficients(CouplingParams(3.0, 1.0), 1.0)
        for route in (bgcs_variances, bgcs_transport):
            a = route(BgcsParams(1.0, 0.0, 0.5), c)
            b = route(BgcsParams(1.0, 0.0, 2.0), c)
            assert abs(a.f_x - b.f_x) > 0.01

    def test_kz_literal_matches_transport(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            zmag, phi, k = rng.uniform(0, 5), rng.uniform(0, 2 * np.pi), rng.choice([0.25, 0.5, 1.5])
            c = coefficients(CouplingParams(rng.uniform(0.5, 3), rng.uniform(0, 3)), rng.uniform(0, 1.5))
            lit = bgcs.literal_variances(zmag, phi, k, c)[2]
            ex = bgcs.transport_variances(zmag, phi, k, c)[2]
            assert float(lit) == pytest.approx(float(ex), rel=1e-10)

    def test_literal_var_deviates_at_positive_time(self):
        c = coefficients(CouplingParams(3.0, 1.0), 1.0)
        lit = bgcs_variances(BgcsParams(2.0, 1.0, 0.5), c)
        ex = bgcs_transport(BgcsParams(2.0, 1.0, 0.5), c)
        assert abs(lit.var_x - ex.var_x) > 0.1
        assert abs(lit.var_y - ex.var_y) > 0.1

    def test_large_intensity_is_finite(self):
        for route in (PAPER, TRANSPORT):
            fx, fy = bgcs.factors(200.0, PHI, 0.5, FIG7, route)
            assert np.all(np.isfinite(fx)) and np.all(np.isfinite(fy))

    def test_profile_minimum_near_half(self):
        fx, fy = bgcs.factors(200.0, PHI, 0.5, FIG7, TRANSPORT)
        assert min(fx.min(), fy.min()) == pytest.approx(-0.5, abs=0.02)
        assert fx.min() >= -1.0 and fy.min() >= -1.0


class TestIntensityLimits:
    def test_weak_at_zero_is_exact(self):
        c = coefficients(CouplingParams(3.0, 1.0), 1.0)
        a = bgcs_variances_weak(BgcsParams(0.0, 0.4), c)
        b = bgcs_variances(BgcsParams(0.0, 0.4), c)
        assert a[:5] == pytest.approx(b[:5], abs=1e-15)

    def test_weak_order(self):
        c = coefficients(CouplingParams(3.0, 1.0), 1.0)
        gaps = []
        for zmag in (1e-1, 1e-2, 1e-3):
            a = np.array(bgcs.literal_variances(zmag, 0.7, 0.5, c))
            b = np.array(bgcs.weak_variances(zmag, 0.7, 0.5, c))
            gaps.append(np.max(np.abs(a - b)))
        assert gaps[2] < 1e-6
        # one decade in |Z| buys four in the gap
        assert gaps[0] / gaps[1] == pytest.approx(1e4, rel=0.05)

    def test_strong_nearly_intensity_independent(self):
        curves = [np.concatenate(bgcs.factors(z, PHI, 0.5, FIG7, "strong")) for z in (100.0, 200.0, 400.0, 800.0)]
        steps = [np.max(np.abs(b - a)) for a, b in zip(curves, curves[1:])]
        # residual dependence decays like 1/|Z|; measured 8.5e-3, 4.3e-3, 2.2e-3
        assert steps[-1] < 3e-3
        for a, b in zip(steps, steps[1:]):
            assert b / a == pytest.approx(0.5, abs=0.02)

    def test_printed_strong_forms_are_not_the_limit(self):
        # the printed S^2 and V^2 coefficient |Z|(1 - 2k) should be |Z|/2
        for k in (0.5, 1.0):
            for zmag in (100.0, 1600.0):
                lit = np.array(bgcs.literal_variances(zmag, PHI, k, FIG7))
                strong = np.array(bgcs.strong_variances(zmag, PHI, k, FIG7))
                fixed = strong.copy()
                fixed[0] += (0.5 - (1 - 2 * k)) * zmag * FIG7.s**2
                fixed[1] += (0.5 - (1 - 2 * k)) * zmag * FIG7.v**2
                assert np.max(np.abs(lit - strong)) / zmag > 0.2
                assert np.max(np.abs(lit - fixed)) / zmag < 1.0 / zmag


class TestZeroIntensity:
    @pytest.mark.parametrize(
        "omega, lambda_, t",
        [(3.0, 1.0, 0.3), (3.0, 1.0, 1.2), (1.0, 0.5, 2.0), (1.0, 2.0, 0.4), (1.0, 10.0, math.pi / 20), (0.5, 0.8, 1.5)],
    )
    def test_printed_matches_vanishing_intensity(self, omega, lambda_, t):
        c = coefficients(CouplingParams(omega, lambda_), t)
        rep = bgcs_transport(BgcsParams(1e-8, 0.3, 0.5), c)
        printed = bgcs_zero_intensity_factors(omega, lambda_, t)
        assert printed[0] == pytest.approx(rep.f_x, abs=1e-6)
        assert printed[1] == pytest.approx(rep.f_y, abs=1e-6)
        assert zero_intensity_factors_exact(omega, lambda_, t) == pytest.approx(printed, abs=1e-12)

    @pytest.mark.parametrize("tau", [0.2, 0.7, 1.5, 4.0])
    def test_resonance(self, tau):
        fx, fy = bgcs_zero_intensity_factors(1.0, 1.0, tau)
        ex = zero_intensity_factors_exact(1.0, 1.0, tau)
        assert fx == pytest.approx(ex[0], abs=1e-12)
        # the printed F_y is half the exact value
        assert ex[1] == pytest.approx(2 * tau**2 / (2 * tau**2 + 1), abs=1e-12)
        assert fy == pytest.approx(0.5 * ex[1], abs=1e-12)

    def test_resonance_zero(self):
        fx, _ = bgcs_zero_intensity_factors(1.0, 1.0, 1 / math.sqrt(2))
        assert fx == pytest.approx(0.0, abs=1e-12)
        assert bgcs_zero_intensity_factors(1.0, 1.0, 0.5)[0] < 0 < bgcs_zero_intensity_factors(1.0, 1.0, 0.9)[0]

    def test_oscillatory_half_pi(self):
        omega, lam = 3.0, 1.0
        g = math.sqrt(omega**2 - lam**2)
        _, fy = bgcs_zero_intensity_factors(omega, lam, 0.5 * math.pi / g)
        assert fy == pytest.approx(-2 * lam**2 / (omega**2 + lam**2), rel=1e-12)
        assert fy == pytest.approx(-0.2, rel=1e-12)

    def test_hyperbolic_y_never_squeezed(self):
        for t in np.linspace(0.01, 3.0, 50):
            assert bgcs_zero_intensity_factors(1.0, 2.0, t)[1] > 0

    def test_index_independent(self):
        c = coefficients(CouplingParams(3.0, 1.0), 0.8)
        a = bgcs_transport(BgcsParams(1e-9, 0.0, 0.5), c)
        b = bgcs_transport(BgcsParams(1e-9, 0.0, 2.0), c)
        assert a.f_x == pytest.approx(b.f_x, abs=1e-8)

    def test_flat_for_weak_coupling(self):
        omega = 1.0
        for lam in (0.05, 0.02):
            vals = [abs(v) for t in np.linspace(0, 10, 201) for v in bgcs_zero_intensity_factors(omega, lam, t)]
            assert max(vals) <= 2 * lam**2 / (omega**2 - lam**2) + 1e-12
            assert max(vals) < 0.01

    def test_flatness_does_not_extend_to_unit_intensity(self):
        c = coefficients(CouplingParams(1.0, 0.05), 20.0)
        z = np.linspace(0, 2, 41)[:, None]
        fx, fy = bgcs.factors(z, PHI[None, :], 0.5, c, TRANSPORT)
        assert max(np.abs(fx).max(), np.abs(fy).max()) > 0.01


class TestStrongCouplingWindow:
    def test_value(self):
        assert bgcs_strong_coupling_window(1.0, 10.0) == pytest.approx(math.asinh(math.sqrt(99) / math.sqrt(2)), rel=1e-15)
        assert bgcs_strong_coupling_window(1.0, 10.0) == pytest.approx(2.649146, abs=1e-6)

    def test_closes_at_resonance(self):
        assert bgcs_strong_coupling_window(1.0, 1.0 + 1e-10) < 1e-4

    def test_boundary(self):
        for omega, lam in [(1.0, 10.0), (1.0, 2.0), (0.5, 0.8)]:
            gamma = math.sqrt(lam**2 - omega**2)
            tau = bgcs_strong_coupling_window(omega, lam)
            assert bgcs_zero_intensity_factors(omega, lam, tau / gamma)[0] == pytest.approx(0.0, abs=1e-10)
            assert bgcs_zero_intensity_factors(omega, lam, 0.9 * tau / gamma)[0] < 0
            assert bgcs_zero_intensity_factors(omega, lam, 1.1 * tau / gamma)[0] > 0

    def test_rejects_oscillatory(self):
        with pytest.raises(ValueError):
            bgcs_strong_coupling_window(2.0, 1.0)
