"""Closed-form constants against quadrature oracles and desk values.

Desk anchors (exact arithmetic): at (alpha=2, b=2, Q=1, |S|=2) the
extremizer is (3/4)(1-x^2)_+ with alpha-norm 3/5 and second moment 1/5,
giving K = 125/9; at (alpha=1/2, b=2, Q=1, |S|=2) the extremizer is
(2/pi)(1+x^2)^-2 with moment 1 and K = (2 pi)^2.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from entroineq.quadrature import integrate_radial
from entroineq.sharp_constants import (
    EntropyParams,
    c1,
    c2,
    dilation_objective,
    log_sobolev_constant,
    optimal_dilation,
    phi1_alpha_norm,
    phi1_moment,
    phi2_alpha_norm,
    phi2_moment,
    shannon_constant,
    sharp_renyi_constant,
    uncertainty_bound,
)

HALF = Fraction(1, 2)
TWO = Fraction(2)


def eucl_sphere(n):
    from entroineq.group_geometry import euclidean_sphere_measure

    return euclidean_sphere_measure(n)


class TestEntropyParams:
    def test_branches(self):
        assert EntropyParams(HALF, 2).branch == "below_one"
        assert EntropyParams(3.0, 1.0).branch == "above_one"

    def test_rejects_alpha_one_and_nonpositive(self):
        for a in (1.0, 0.0, -2.0, math.nan):
            with pytest.raises(ValueError):
                EntropyParams(a, 2.0)
        with pytest.raises(ValueError):
            EntropyParams(2.0, 0.0)

    def test_boundary_rejected_exactly(self):
        # b = Q(1/alpha - 1) exactly on the boundary, as Fractions
        with pytest.raises(ValueError):
            EntropyParams(HALF, Fraction(1)).validate(Fraction(1))

    def test_valid_passes(self):
        EntropyParams(HALF, Fraction(2)).validate(Fraction(1))
        EntropyParams(TWO, Fraction(1, 10)).validate(Fraction(5))


class TestC1:
    def test_desk_value(self):
        assert c1(EntropyParams(HALF, TWO), 1, 2.0) == pytest.approx(
            2.0 / math.pi, rel=1e-13
        )

    def test_normalizes_phi1_on_the_line(self):
        # oracle: int (2/pi)(1+x^2)^-2 dx = 1 via the arctangent family
        cval = c1(EntropyParams(HALF, TWO), 1, 2.0)
        est = integrate_radial(lambda r: cval * (1.0 + r * r) ** -2, 1.0, 2.0)
        assert est.value == pytest.approx(1.0, abs=1e-10)

    def test_boundary_rejected(self):
        with pytest.raises(ValueError):
            c1(EntropyParams(HALF, Fraction(1)), 1, 2.0)

    def test_quadrature_normalization_q2(self):
        params = EntropyParams(0.8, 2.0)
        sphere = 2.0 * math.pi
        cval = c1(params, 2, sphere)
        est = integrate_radial(
            lambda r: cval * (1.0 + r * r) ** (1.0 / (0.8 - 1.0)), 2.0, sphere
        )
        assert est.value == pytest.approx(1.0, abs=1e-8)

    def test_wrong_branch(self):
        with pytest.raises(ValueError):
            c1(EntropyParams(TWO, TWO), 1, 2.0)


class TestC2:
    def test_desk_value(self):
        assert c2(EntropyParams(TWO, TWO), 1, 2.0) == pytest.approx(0.75, rel=1e-13)

    def test_quadrature_normalization_q3(self):
        params = EntropyParams(TWO, TWO)
        sphere = 4.0 * math.pi
        cval = c2(params, 3, sphere)
        est = integrate_radial(
            lambda r: cval * max(1.0 - r * r, 0.0), 3.0, sphere, support=1.0
        )
        assert est.value == pytest.approx(1.0, abs=1e-8)

    def test_large_alpha_limit_is_uniform_density(self):
        # alpha -> inf: profile -> ball indicator, C2 -> Q/(|S|/b * b) = 1/2 here
        val = c2(EntropyParams(Fraction(10**6), TWO), 1, 2.0)
        assert val == pytest.approx(0.5, rel=1e-5)

    def test_wrong_branch(self):
        with pytest.raises(ValueError):
            c2(EntropyParams(HALF, TWO), 1, 2.0)


class TestExtremizerNorms:
    def test_phi1_desk(self):
        # (2/pi)^(-1/2) * 2 = sqrt(2 pi)
        val = phi1_alpha_norm(EntropyParams(HALF, TWO), 1, 2.0)
        assert val == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-12)

    def test_phi1_matches_quadrature(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            a = rng.uniform(0.55, 0.9)
            q = rng.integers(1, 4)
            b = rng.uniform(q * (1.0 / a - 1.0) + 0.5, q * (1.0 / a - 1.0) + 3.0)
            params = EntropyParams(a, b)
            sphere = eucl_sphere(q)
            cval = c1(params, q, sphere)
            est = integrate_radial(
                lambda r: (cval * (1.0 + r**b) ** (1.0 / (a - 1.0))) ** a,
                float(q),
                sphere,
            )
            assert phi1_alpha_norm(params, q, sphere) == pytest.approx(
                est.value, abs=max(1e-8, 10 * est.abs_error)
            )

    def test_phi2_desk(self):
        assert phi2_alpha_norm(EntropyParams(TWO, TWO), 1, 2.0) == pytest.approx(
            0.6, rel=1e-13
        )

    def test_phi2_matches_quadrature(self):
        params = EntropyParams(3.0, 1.0)
        sphere = eucl_sphere(2)
        cval = c2(params, 2, sphere)
        est = integrate_radial(
            lambda r: (cval * max(1.0 - r, 0.0) ** 0.5) ** 3.0,
            2.0,
            sphere,
            support=1.0,
        )
        assert phi2_alpha_norm(params, 2, sphere) == pytest.approx(est.value, abs=1e-8)

    def test_phi2_algebraic_identity(self):
        # alpha_norm / C^(alpha-1) == ab/(ab + Q(alpha-1)) by construction
        params = EntropyParams(TWO, TWO)
        cval = c2(params, 1, 2.0)
        ratio = phi2_alpha_norm(params, 1, 2.0) / cval ** (2.0 - 1.0)
        assert ratio == pytest.approx(4.0 / 5.0, rel=1e-14)


class TestMoments:
    def test_phi1_desk_unit(self):
        assert phi1_moment(EntropyParams(HALF, TWO), 1) == 1.0

    def test_phi1_plugin(self):
        assert phi1_moment(EntropyParams(Fraction(9, 10), TWO), 2) == pytest.approx(
            1.0 / 8.0, rel=1e-14
        )

    def test_phi1_positive_on_valid_draws(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            a = rng.uniform(0.3, 0.95)
            q = rng.uniform(0.5, 4.0)
            b = q * (1.0 / a - 1.0) + rng.uniform(0.01, 3.0)
            assert phi1_moment(EntropyParams(a, b), q) > 0

    def test_phi2_desk_fifth(self):
        assert phi2_moment(EntropyParams(TWO, TWO), 1) == pytest.approx(0.2, rel=1e-14)

    def test_phi2_matches_quadrature(self):
        params = EntropyParams(2.5, 1.5)
        sphere = eucl_sphere(3)
        cval = c2(params, 3, sphere)
        e = 1.0 / (2.5 - 1.0)
        est = integrate_radial(
            lambda r: r**1.5 * cval * max(1.0 - r**1.5, 0.0) ** e,
            3.0,
            sphere,
            support=1.0,
        )
        assert phi2_moment(params, 3) == pytest.approx(est.value, abs=1e-9)


class TestSharpConstant:
    def test_desk_above_one(self):
        res = sharp_renyi_constant(EntropyParams(TWO, TWO), Fraction(1), 2.0)
        assert res.branch == "above_one"
        assert res.K == pytest.approx(125.0 / 9.0, rel=1e-9)
        assert res.ingredients.c == pytest.approx(0.75, rel=1e-12)
        assert res.ingredients.alpha_norm == pytest.approx(0.6, rel=1e-12)
        assert res.ingredients.moment == pytest.approx(0.2, rel=1e-12)
        # stated form of the constant: 4 (5/4)^3 ((b/|S|) G(1/2)G(2)/G(5/2))^-2
        assert res.A_stated == pytest.approx(1125.0 / 256.0, rel=1e-12)

    def test_desk_below_one(self):
        res = sharp_renyi_constant(EntropyParams(HALF, TWO), Fraction(1), 2.0)
        assert res.branch == "below_one"
        assert res.K == pytest.approx(4.0 * math.pi**2, rel=1e-9)
        assert res.A_stated == pytest.approx(2.0 * math.pi, rel=1e-12)
        assert res.ingredients.moment == 1.0

    def test_equality_identity_from_ingredients(self):
        # h_alpha[phi] computed from closed forms must satisfy
        # h = (Q/b) log(K * moment) on both branches
        for params, q in [
            (EntropyParams(TWO, TWO), Fraction(1)),
            (EntropyParams(HALF, TWO), Fraction(1)),
            (EntropyParams(Fraction(3), Fraction(3, 2)), Fraction(2)),
            (EntropyParams(Fraction(4, 5), Fraction(3)), Fraction(2)),
        ]:
            sphere = eucl_sphere(int(q))
            res = sharp_renyi_constant(params, q, sphere)
            a = float(params.alpha)
            h = math.log(res.ingredients.alpha_norm) / (1.0 - a)
            rhs = (float(q) / float(params.b)) * math.log(
                res.K * res.ingredients.moment
            )
            assert h == pytest.approx(rhs, abs=1e-10)

    @pytest.mark.parametrize("q", [1, 2, 4])
    def test_shannon_limit_two_percent(self, q):
        sphere = eucl_sphere(q)
        cg = shannon_constant(q, sphere)
        for da in (Fraction(1, 1000), -Fraction(1, 1000)):
            res = sharp_renyi_constant(EntropyParams(1 + da, TWO), Fraction(q), sphere)
            assert abs(res.K / cg - 1.0) <= 2e-2

    @pytest.mark.parametrize("q", [1, 2, 4])
    def test_shannon_limit_monotone_improvement(self, q):
        sphere = eucl_sphere(q)
        cg = shannon_constant(q, sphere)

        def rel(da):
            res = sharp_renyi_constant(EntropyParams(1 + da, TWO), Fraction(q), sphere)
            return abs(res.K / cg - 1.0)

        assert rel(Fraction(1, 10000)) < rel(Fraction(1, 1000))
        assert rel(-Fraction(1, 10000)) < rel(-Fraction(1, 1000))


class TestShannonConstant:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_euclidean_reduction(self, n):
        assert shannon_constant(n, eucl_sphere(n)) == pytest.approx(
            2.0 * math.e * math.pi / n, rel=1e-12
        )

    def test_q1_s2(self):
        assert shannon_constant(1, 2.0) == pytest.approx(
            2.0 * math.pi * math.e, rel=1e-12
        )

    def test_h1_koranyi_positive(self):
        from entroineq.group_geometry import GroupSpec, QuasiNormSpec, sphere_measure

        value, _ = sphere_measure(
            GroupSpec.heisenberg(1), QuasiNormSpec.koranyi(), samples=10**5, seed=0
        )
        assert shannon_constant(4, value) > 0


class TestLogSobolevConstant:
    def test_heisenberg_1(self):
        assert log_sobolev_constant("heisenberg_n", n=1) == pytest.approx(
            1.0 / math.pi, rel=1e-13
        )

    def test_heisenberg_2(self):
        expect = 2.0 ** (1.0 / 3.0) / (4.0 * math.pi)
        assert log_sobolev_constant("heisenberg_n", n=2) == pytest.approx(
            expect, rel=1e-13
        )

    def test_euclidean_3(self):
        expect = (3.0 * math.pi) ** -0.5 * 4.0 / math.sqrt(math.pi)
        assert log_sobolev_constant("euclidean_n", n=3) == pytest.approx(
            expect, rel=1e-13
        )

    def test_euclidean_degenerate(self):
        for n in (1, 2):
            with pytest.raises(ValueError):
                log_sobolev_constant("euclidean_n", n=n)

    def test_custom(self):
        assert log_sobolev_constant("custom", value=0.37) == 0.37
        with pytest.raises(ValueError):
            log_sobolev_constant("custom", value=-1.0)
        with pytest.raises(ValueError):
            log_sobolev_constant("nonsense", n=1)


class TestUncertaintyBound:
    def test_desk(self):
        assert uncertainty_bound(1, 2.0, 1.0) == pytest.approx(
            2.0 / (math.pi * math.e), rel=1e-12
        )

    def test_euclidean_3_closed_form(self):
        a3 = log_sobolev_constant("euclidean_n", n=3)
        bound = uncertainty_bound(3, eucl_sphere(3), a3)
        assert bound == pytest.approx(3.0 * math.sqrt(3.0) / (2.0 * math.e), rel=1e-12)
        assert bound < 9.0  # Gaussian product n^2 exceeds it

    def test_monotone_in_A(self):
        b1 = uncertainty_bound(2, eucl_sphere(2), 1.0)
        b2 = uncertainty_bound(2, eucl_sphere(2), 2.0)
        assert b2 < b1


class TestOptimalDilation:
    def test_below_one_desk(self):
        lam = optimal_dilation(EntropyParams(HALF, TWO), 1, 1.0)
        assert lam == pytest.approx(1.0, rel=1e-14)

    def test_moment_power_law(self):
        params = EntropyParams(HALF, TWO)
        base = optimal_dilation(params, 1, 1.0)
        scaled = optimal_dilation(params, 1, 2.0**2)
        assert scaled == pytest.approx(2.0 * base, rel=1e-13)

    def test_below_one_minimizes_objective(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            a = rng.uniform(0.4, 0.95)
            q = rng.uniform(0.5, 3.0)
            b = q * (1.0 / a - 1.0) + rng.uniform(0.1, 2.0)
            m = rng.uniform(0.2, 5.0)
            params = EntropyParams(a, b)
            lam = optimal_dilation(params, q, m)
            best = dilation_objective(params, q, m, lam)
            for eps in (1e-3, -1e-3):
                assert dilation_objective(params, q, m, lam * (1 + eps)) >= best
            for other in np.geomspace(lam / 8, lam * 8, 17):
                assert dilation_objective(params, q, m, float(other)) >= best - 1e-12

    def test_above_one_extremizer_is_fixed_point(self):
        # at u = phi2 the optimal dilation is exactly 1
        params = EntropyParams(TWO, TWO)
        cval = c2(params, 1, 2.0)
        norm_a = phi2_alpha_norm(params, 1, 2.0)
        m = phi2_moment(params, 1)
        lam = optimal_dilation(
            params, 1, m, c=cval, extremizer_alpha_norm=norm_a, u_alpha_norm=norm_a
        )
        assert lam == pytest.approx(1.0, rel=1e-12)

    def test_above_one_needs_aux(self):
        with pytest.raises(ValueError):
            optimal_dilation(EntropyParams(TWO, TWO), 1, 0.2)
