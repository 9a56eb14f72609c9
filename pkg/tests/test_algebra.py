import math

import numpy as np
import pytest

import battery
from periodic_gfa import algebra as A
from periodic_gfa import embedding as E
from periodic_gfa import series as S
from periodic_gfa import weights as W

TWO_PI = 2 * math.pi
NMAX = 32


@pytest.fixture(scope="module")
def nets(ws_p1):
    return battery.full_battery(ws_p1, NMAX)


class TestNet:
    def test_constant_net(self):
        net = A.constant_net(S.TrigPoly.sine(), 16)
        assert all(net.at(n) is net.at(0) for n in range(17))

    def test_memoized_deterministic(self):
        calls = []

        def gen(n):
            calls.append(n)
            return S.TrigPoly.dirichlet(n)

        net = A.make_net(gen, 16)
        a = net.at(5)
        b = net.at(5)
        assert a is b and calls.count(5) == 1

    def test_generator_fail(self):
        def gen(n):
            if n == 16:
                raise RuntimeError("boom")
            return S.TrigPoly.sine()

        with pytest.raises(A.GeneratorFail):
            A.make_net(gen, 16)

    def test_nmax_floor(self):
        with pytest.raises(ValueError):
            A.make_net(lambda n: S.TrigPoly.sine(), 4)

    def test_ring_structure(self, rng):
        def rpoly(deg):
            return S.TrigPoly(rng.standard_normal(2 * deg + 1) + 1j * rng.standard_normal(2 * deg + 1), deg)

        f = A.make_net(lambda n: rpoly(3), 16)
        g = A.make_net(lambda n: rpoly(4), 16)
        h = A.make_net(lambda n: rpoly(2), 16)
        for n in (0, 7, 16):
            fg, gf = (f * g).at(n), (g * f).at(n)
            assert np.allclose(fg.coef, gf.coef, atol=1e-10)
            lhs = ((f * g) * h).at(n)
            rhs = (f * (g * h)).at(n)
            assert np.allclose(lhs.coef, rhs.coef, atol=1e-10)
            dist_l = (f * (g + h)).at(n)
            dist_r = ((f * g) + (f * h)).at(n)
            assert np.allclose(dist_l.coefficient(dist_r.support()), dist_r.coef, atol=1e-10)


class TestModerate:
    def test_dirichlet_both_classes(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX, "dirichlet")
        assert A.classify_moderate(net, ws_p1, "roumieu").bounded
        assert A.classify_moderate(net, ws_p1, "beurling").bounded

    def test_constant_net(self, ws_p1):
        net = A.constant_net(S.TrigPoly.sine(), NMAX)
        assert A.classify_moderate(net, ws_p1, "roumieu").bounded
        assert A.classify_moderate(net, ws_p1, "beurling").bounded

    def test_gauge_scaled_dirichlet_not_moderate(self, ws_p1):
        # growth engineered to outrun the largest grid lambda
        net = A.make_net(
            lambda n: S.TrigPoly.dirichlet(n).scaled(
                (2 * n + 1) * math.exp(float(W.associated_gauge(ws_p1, float(n))))
            ),
            NMAX,
        )
        assert not A.classify_moderate(net, ws_p1, "beurling").bounded

    def test_verdict_margin_invariant(self, ws_p1):
        net = A.constant_net(S.TrigPoly.sine(), NMAX)
        v = A.classify_moderate(net, ws_p1, "roumieu")
        assert (v.margin <= v.tau) == v.bounded
        assert v.method == "full_norm" and v.desk_scale


class TestNegligible:
    def test_decaying_sine(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.sine().scaled(math.exp(-n)), NMAX)
        assert A.classify_negligible(net, ws_p1, "roumieu").bounded
        # Beurling asks every lambda, including rates above the decay
        assert not A.classify_negligible(net, ws_p1, "beurling").bounded

    def test_dirichlet_not(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        assert not A.classify_negligible(net, ws_p1, "roumieu").bounded

    def test_zero(self, ws_p1):
        net = A.constant_net(S.TrigPoly.zero(), NMAX)
        v = A.classify_negligible(net, ws_p1, "roumieu")
        assert v.bounded and v.margin == -math.inf

    def test_beurling_negligible_needs_fast_decay(self, ws_p1):
        # decay beating twice the largest grid rate passes the forall pattern
        fast = A.make_net(
            lambda n: S.TrigPoly.sine().scaled(
                math.exp(-2.0 * float(W.associated_gauge(ws_p1, 8.0 * n)))
            ),
            NMAX,
        )
        assert A.classify_negligible(fast, ws_p1, "beurling").bounded
        assert A.classify_negligible(fast, ws_p1, "roumieu").bounded


class TestSupnormCharacterization:
    def test_agreement_on_battery(self, ws_p1, nets):
        for net, expect_neg in nets:
            mod = A.classify_moderate(net, ws_p1, "roumieu")
            assert mod.bounded, net.label
            full = A.classify_negligible(net, ws_p1, "roumieu")
            sup = A.classify_negligible_supnorm(net, ws_p1, "roumieu", moderate=mod)
            assert full.bounded == sup.bounded == expect_neg, net.label

    def test_hypothesis_fail(self, ws_p1):
        net = A.make_net(
            lambda n: S.TrigPoly.dirichlet(n).scaled(
                (2 * n + 1) * math.exp(float(W.associated_gauge(ws_p1, float(8 * n))))
            ),
            NMAX,
        )
        with pytest.raises(A.HypothesisFail):
            A.classify_negligible_supnorm(net, ws_p1, "roumieu")


class TestCoefficientSide:
    def test_agreement_on_battery(self, ws_p1, nets):
        for net, expect_neg in nets:
            assert A.coef_classify(net, ws_p1, "roumieu", "moderate").bounded, net.label
            got = A.coef_classify(net, ws_p1, "roumieu", "negligible").bounded
            assert got == expect_neg, net.label

    def test_zero(self, ws_p1):
        net = A.constant_net(S.TrigPoly.zero(), NMAX)
        assert A.coef_classify(net, ws_p1, "roumieu", "negligible").bounded


class TestRjFamilies:
    def test_dirichlet_moderate_with_slow_s(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        r = W.linear_rsequence(256)
        s = W.build_rsequence(np.maximum(1.0, np.arange(0, 257) / 16.0), label="slow")
        v = A.roumieu_rj_classify(net, ws_p1, [(r, s)], "moderate")
        assert v.bounded and v.method == "rj_family"

    def test_zero_negligible_all_families(self, ws_p1):
        net = A.constant_net(S.TrigPoly.zero(), NMAX)
        fams = [(W.linear_rsequence(128), W.linear_rsequence(128))]
        assert A.roumieu_rj_classify(net, ws_p1, fams, "negligible").bounded

    def test_decaying_sine_matches_plain_classifier(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.sine().scaled(math.exp(-n)), NMAX)
        fams = [(W.linear_rsequence(128), W.linear_rsequence(128))]
        rj = A.roumieu_rj_classify(net, ws_p1, fams, "negligible")
        plain = A.classify_negligible(net, ws_p1, "roumieu")
        assert rj.bounded and plain.bounded

    def test_empty_family_rejected(self, ws_p1):
        net = A.constant_net(S.TrigPoly.zero(), NMAX)
        with pytest.raises(ValueError):
            A.roumieu_rj_classify(net, ws_p1, [], "moderate")


class TestProducts:
    def test_delta_squared_moderate_not_negligible(self, ws_p1):
        # degree doubles, so moderateness needs h below lambda_min / 2
        net = A.make_net(
            lambda n: S.multiply(S.TrigPoly.dirichlet(n), S.TrigPoly.dirichlet(n)), NMAX
        )
        assert A.classify_moderate(net, ws_p1, "roumieu", h_grid=battery.WIDE_H).bounded
        assert not A.classify_negligible(net, ws_p1, "roumieu").bounded
        peak = S.evaluate(net.at(8), 0.0)
        assert peak.real == pytest.approx((17 / TWO_PI) ** 2, rel=1e-12)

    def test_ideal_property(self, ws_p1):
        moderate = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        negligible = A.make_net(lambda n: S.TrigPoly.sine().scaled(math.exp(-n)), NMAX)
        assert A.classify_negligible(moderate * negligible, ws_p1, "roumieu").bounded

    def test_zero_absorbs(self, ws_p1):
        f = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        z = A.constant_net(S.TrigPoly.zero(), NMAX)
        prod = f * z
        assert all(np.max(np.abs(prod.at(n).coef)) == 0 for n in range(NMAX + 1))

    def test_sine_times_cosine(self):
        sn = A.constant_net(S.TrigPoly.sine(), 16)
        cn = A.constant_net(S.TrigPoly.cosine(), 16)
        prod = (sn * cn).at(7)
        assert prod.coefficient(2) == pytest.approx(-0.25j)


class TestPointValues:
    def test_delta_at_origin(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        z = A.point_value(net, A.GeneralizedNumber(np.zeros(NMAX + 1)))
        expect = (2 * np.arange(NMAX + 1) + 1) / TWO_PI
        assert np.allclose(z.values.real, expect, atol=1e-12)
        assert A.gn_classify(z, ws_p1, "roumieu", "moderate").bounded
        assert not A.gn_classify(z, ws_p1, "roumieu", "negligible").bounded

    def test_sine_at_pi(self):
        net = A.constant_net(S.TrigPoly.sine(), 16)
        z = A.point_value(net, A.GeneralizedNumber(np.full(17, math.pi)))
        assert np.max(np.abs(z.values)) < 1e-12

    def test_delta_at_pi(self):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), 16)
        z = A.point_value(net, A.GeneralizedNumber(np.full(17, math.pi)))
        # D_n(pi) alternates +-1/(2 pi)
        assert np.allclose(np.abs(z.values), 1 / TWO_PI, atol=1e-12)

    def test_gn_beurling_patterns(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        z = A.point_value(net, A.GeneralizedNumber(np.zeros(NMAX + 1)))
        assert A.gn_classify(z, ws_p1, "beurling", "moderate").bounded
        assert not A.gn_classify(z, ws_p1, "beurling", "negligible").bounded

    def test_point_value_soundness(self, ws_p1, rng):
        net = A.make_net(lambda n: S.TrigPoly.sine().scaled(math.exp(-n)), NMAX)
        assert A.classify_negligible(net, ws_p1, "roumieu").bounded
        for _ in range(20):
            t = A.GeneralizedNumber(rng.uniform(0, TWO_PI, NMAX + 1))
            z = A.point_value(net, t)
            assert A.gn_classify(z, ws_p1, "roumieu", "negligible").bounded

    def test_domain_check(self):
        net = A.constant_net(S.TrigPoly.sine(), 16)
        with pytest.raises(ValueError):
            A.point_value(net, A.GeneralizedNumber(np.full(17, 7.0)))


class TestWitness:
    def test_dirichlet_peaks_at_origin(self, ws_p1):
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        idx, pts = A.find_witness(net, ws_p1, 1.0)
        assert len(idx) > 0
        assert np.allclose(np.minimum(pts, TWO_PI - pts), 0.0, atol=1e-9)
        z = A.GeneralizedNumber(
            np.array([S.evaluate(net.at(n), pts[list(idx).index(n)] if n in idx else 0.0)
                      for n in range(NMAX + 1)])
        )
        assert not A.gn_classify(z, ws_p1, "roumieu", "negligible").bounded

    def test_modulated_dirichlet_peak_location(self, ws_p1):
        net = A.make_net(
            lambda n: S.multiply(S.TrigPoly.sine(), S.TrigPoly.dirichlet(n)), NMAX
        )
        idx, pts = A.find_witness(net, ws_p1, 1.0)
        for n, t in zip(idx, pts):
            t_star = math.pi / (2 * n + 1)
            d = min(abs(t - t_star), abs(TWO_PI - t - t_star))
            assert d < 0.75 * t_star, (n, t)

    def test_zero_has_no_witness(self, ws_p1):
        net = A.constant_net(S.TrigPoly.zero(), NMAX)
        with pytest.raises(A.NoWitness):
            A.find_witness(net, ws_p1, 1.0)
