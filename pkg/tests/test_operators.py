import math

import mpmath as mp
import numpy as np
import pytest
from scipy.special import gammaln

import battery
from periodic_gfa import algebra as A
from periodic_gfa import operators as O
from periodic_gfa import series as S
from periodic_gfa import weights as W

NMAX = 32


def mp_even_series(L, s, x, terms=400):
    """High-precision oracle for sum_p (L x)^{2p} / ((2p)!)^s."""
    with mp.workdps(60):
        tot = mp.mpf(0)
        Lx = mp.mpf(L) * mp.mpf(x)
        for p in range(terms):
            tot += Lx ** (2 * p) / mp.factorial(2 * p) ** s
        return float(mp.log(tot))


class TestBuild:
    def test_finite_polynomial_any_class(self, ws_p2):
        for cls in ("beurling", "roumieu"):
            P = O.build_ultrapolynomial([0, 0, 1], ws_p2, cls)
            assert P.form == "table" and P.degree == 2

    def test_equality_case(self, ws_p1):
        coef = np.exp(-gammaln(np.arange(0, 21) + 1.0))  # a_n = 1/n!
        P = O.build_ultrapolynomial({"a": coef, "C": 1.0, "L": 1.0}, ws_p1, "beurling")
        assert P.cert["C"] == 1.0

    def test_declared_bound_violated(self, ws_p1):
        with pytest.raises(O.ClassFail):
            O.build_ultrapolynomial({"a": [1.0, 5.0], "C": 1.0, "L": 1.0}, ws_p1, "beurling")

    def test_structure_beurling_coefficients(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        assert P.cert["L"] == 1.0 * ws_p2.H**2 and P.cert["C"] == 1.0
        # a_{2p} = (lambda H^2)^{2p} / M_{2p} meets the bound with equality
        for p in (0, 1, 3):
            a2p = (1.0 * ws_p2.H**2) ** (2 * p) * math.exp(-float(ws_p2.logM_at(2 * p)))
            bound = P.cert["C"] * P.cert["L"] ** (2 * p) * math.exp(-float(ws_p2.logM_at(2 * p)))
            assert a2p == pytest.approx(bound, rel=1e-12)

    def test_structure_class_mismatch(self, ws_p2):
        with pytest.raises(O.ClassFail):
            O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "roumieu")

    def test_structure_roumieu_certified(self, ws_p1):
        rs = W.linear_rsequence(512)
        P = O.build_ultrapolynomial({"form": "structure_roumieu", "r": rs, "k": rs}, ws_p1, "roumieu")
        assert set(P.cert["C_of_L"]) == {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}


class TestEval:
    def test_structure_at_zero(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        assert O.eval_ultrapoly(P, 0.0) == pytest.approx(1.0)

    def test_square(self, ws_p2):
        P = O.build_ultrapolynomial([0, 0, 1], ws_p2, "beurling")
        assert O.eval_ultrapoly(P, 3.0) == pytest.approx(9.0)

    @pytest.mark.parametrize("x", [0.5, 5.0, 40.0])
    def test_structure_matches_mpmath(self, ws_p2, x):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        got = float(O.log_eval_ultrapoly(P, x)[0])
        want = mp_even_series(1.0 * ws_p2.H**2, 2.0, x)
        assert got == pytest.approx(want, abs=1e-10)

    def test_structure_roumieu_matches_mpmath(self, ws_p1):
        rs = W.linear_rsequence(512)
        P = O.build_ultrapolynomial({"form": "structure_roumieu", "r": rs, "k": rs}, ws_p1, "roumieu")
        with mp.workdps(60):
            tot = mp.mpf(0)
            base = mp.mpf(2 * ws_p1.H * 7.0)
            for p in range(200):
                tot += base ** (2 * p) / (mp.factorial(2 * p + 1) * mp.factorial(2 * p))
            want = 2 * float(mp.log(tot))
        got = float(O.log_eval_ultrapoly(P, 7.0)[0])
        assert got == pytest.approx(want, abs=1e-10)

    def test_lower_bound_at_x(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        logp = float(O.log_eval_ultrapoly(P, 5.0)[0])
        assert logp >= 2 * float(W.associated_gauge(ws_p2, 5.0))

    def test_no_converge_on_short_table(self):
        logM = gammaln(np.arange(0, 17) + 1.0)
        ws = W.build_weight_sequence({"kind": "table", "logM": logM, "A": 1, "H": 2})
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws, "beurling")
        with pytest.raises(O.NoConverge):
            O.log_eval_ultrapoly(P, 50.0)


class TestApply:
    def test_square_on_sine(self, ws_p1):
        P = O.build_ultrapolynomial([0, 0, 1], ws_p1, "beurling")
        out = O.apply_operator(P, S.TrigPoly.sine())
        assert np.allclose(out.coef, S.TrigPoly.sine().coef)

    def test_exponential_symbol(self, ws_p1):
        coef = np.exp(-gammaln(np.arange(0, 26) + 1.0))
        P = O.build_ultrapolynomial({"a": coef, "C": 1.0, "L": 1.0}, ws_p1, "beurling")
        for k in (1, 2, 4):
            out = O.apply_operator(P, S.TrigPoly.basis(k))
            assert out.coefficient(k) == pytest.approx(math.exp(k), rel=1e-9)

    def test_zero(self, ws_p1):
        P = O.build_ultrapolynomial([0, 0, 1], ws_p1, "beurling")
        out = O.apply_operator(P, S.TrigPoly.zero(4))
        assert np.max(np.abs(out.coef)) == 0.0

    def test_net_application(self, ws_p1):
        P = O.build_ultrapolynomial([0, 0, 1], ws_p1, "beurling")
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), 16)
        out = O.apply_operator(P, net)
        assert out.at(3).coefficient(2) == pytest.approx(4 / (2 * math.pi))

    def test_multiplier_identity_battery(self, ws_p1, ws_p2, rng):
        ops = [
            O.build_ultrapolynomial([0, 0, 1], ws_p1, "beurling"),
            O.build_ultrapolynomial(
                {"a": np.exp(-gammaln(np.arange(0, 21) + 1.0))}, ws_p1, "beurling"
            ),
            O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling"),
        ]
        dists = [S.delta(), S.cot_reg(), S.exp_decay(1.0)]
        ks = np.arange(-32, 33)
        for P in ops:
            pk = O.multiplier_values(P, ks)
            for d in dists:
                got = O.apply_operator(P, d).coefficients(ks)
                want = pk * d.coefficients(ks)
                assert np.all(np.abs(got - want) <= 1e-12 * (1 + np.abs(want)))

    def test_class_closure_polynomial(self, ws_p1):
        P = O.build_ultrapolynomial([1, 0, 1], ws_p1, "roumieu")
        net = A.make_net(lambda n: S.TrigPoly.dirichlet(n), NMAX)
        out = O.apply_operator(P, net)
        assert A.classify_moderate(out, ws_p1, "roumieu", h_grid=battery.WIDE_H).bounded

    def test_class_closure_structure(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 0.25}, ws_p2, "beurling")
        net = A.make_net(lambda n: S.TrigPoly.sine().scaled(math.exp(-n)), NMAX)
        out = O.apply_operator(P, net)
        assert A.classify_moderate(out, ws_p2, "beurling").bounded


class TestShift:
    def test_binomial(self, ws_p1):
        P = O.build_ultrapolynomial([0, 0, 1], ws_p1, "beurling")
        sh = O.shifted_operator(P, 1)
        assert np.allclose(sh.coef, [1, 2, 1])

    def test_zero_shift(self, ws_p1):
        P = O.build_ultrapolynomial([3, 1, 2], ws_p1, "beurling")
        assert np.allclose(O.shifted_operator(P, 0).coef, P.coef)

    def test_leibniz_identity(self, ws_p1, rng):
        from periodic_gfa.embedding import modulate

        for _ in range(6):
            deg_p = int(rng.integers(1, 5))
            P = O.build_ultrapolynomial(
                rng.standard_normal(deg_p + 1) + 1j * rng.standard_normal(deg_p + 1),
                ws_p1,
                "roumieu",
            )
            fdeg = int(rng.integers(0, 7))
            f = S.TrigPoly(
                rng.standard_normal(2 * fdeg + 1) + 1j * rng.standard_normal(2 * fdeg + 1), fdeg
            )
            k = int(rng.integers(-8, 9))
            lhs = O.apply_operator(P, modulate(f, k))
            rhs = modulate(O.apply_operator(O.shifted_operator(P, k), f), k)
            assert np.allclose(lhs.coefficient(rhs.support()), rhs.coef, atol=1e-10)

    def test_structure_refuses_table_shift(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        with pytest.raises(ValueError):
            O.shifted_operator(P, 1)


class TestLowerBound:
    def test_structure_passes(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        rep = O.lower_bound_check(P, ws_p2, 1.0, np.geomspace(1.0, 100.0, 25))
        assert rep.passed and rep.c_prime > 0

    def test_polynomial_fails(self, ws_p2):
        P = O.build_ultrapolynomial([0, 0, 1], ws_p2, "beurling")
        rep = O.lower_bound_check(P, ws_p2, 1.0, np.geomspace(1.0, 100.0, 25))
        assert not rep.passed

    def test_origin_caps_cprime(self, ws_p2):
        P = O.build_ultrapolynomial({"form": "structure_beurling", "lambda": 1.0}, ws_p2, "beurling")
        rep = O.lower_bound_check(P, ws_p2, 1.0, np.geomspace(1e-6, 100.0, 30))
        # at x -> 0 the reference is 1, so C' <= P(0) = 1 up to grid effects
        assert rep.c_prime <= O.eval_ultrapoly(P, 1e-6) + 1e-9


class TestFactorize:
    def test_beurling_instance(self, ws_p2):
        c = S.exp_growth(1.0, ws_p2, "beurling")
        fact = O.structure_factorize(c, ws_p2, "beurling", lam=1.0, k_max=200)
        assert fact.reconstruction_residual <= 1e-12
        assert fact.g_inclass.bounded
        assert fact.lower_bound.passed and fact.lower_bound.c_prime > 0

    def test_delta_instance(self, ws_p2):
        fact = O.structure_factorize(S.delta(), ws_p2, "beurling", lam=1.0, k_max=128)
        assert fact.g_inclass.bounded
        ks = np.arange(1, 129)
        g = np.abs(fact.g.coefficients(ks))
        gauge = np.asarray(W.associated_gauge(ws_p2, ks.astype(float)))
        # away from the origin, P(k) >= C' e^{2M(k)} with C' ~ 200 makes
        # g decay strictly below e^{-M(k)}
        assert np.all(g <= np.exp(-gauge))

    def test_zero_distribution(self, ws_p2):
        zero = S.from_trigpoly(S.TrigPoly.zero(), label="0")
        fact = O.structure_factorize(zero, ws_p2, "beurling", lam=1.0, k_max=64)
        assert fact.reconstruction_residual == 0.0
        assert np.max(np.abs(fact.g.coefficients(np.arange(-16, 17)))) == 0.0

    def test_growth_fail(self, ws_p2):
        bad = S.CoefDistribution(
            oracle=lambda ks: np.exp(np.abs(np.asarray(ks, dtype=float))).astype(complex),
            tag="table",
            cls="beurling",
            growth_lambda=1.0,
            label="e^|k|",
        )
        with pytest.raises(O.GrowthFail):
            O.structure_factorize(bad, ws_p2, "beurling", lam=1.0, k_max=128)

    def test_relation_fail(self, ws_p2):
        c = S.exp_growth(1.0, ws_p2, "beurling")
        with pytest.raises(O.RelationFail):
            O.structure_factorize(c, ws_p2, "beurling", lam=1.0, target=ws_p2, k_max=64)

    def test_target_certification(self, ws_p2):
        c = S.exp_growth(1.0, ws_p2, "beurling")
        target = W.gevrey(3.0, 512)
        fact = O.structure_factorize(c, ws_p2, "beurling", lam=1.0, target=target, k_max=128)
        assert fact.g_target is not None and fact.g_target.bounded

    def test_roumieu_instance(self, ws_p1):
        fact = O.structure_factorize(S.cot_reg(), ws_p1, "roumieu", k_max=128)
        assert fact.reconstruction_residual <= 1e-12
        assert fact.P.form == "structure_roumieu"
        assert fact.g_inclass.bounded
        assert fact.lower_bound.passed
