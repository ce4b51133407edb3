import math

import numpy as np
import pytest

from geopot.domains import HALFLINE, Interval
from geopot.quadrature import adaptive_gauss
from geopot.stable_ref import (
    V_alpha,
    ghat,
    ghat_stable,
    green_brownian,
    green_stable_halfline,
    poisson_stable_halfline,
    resolved_poisson_constants,
)


class TestVAlpha:
    def test_values_and_vectorization(self):
        assert V_alpha(4.0, 1.0) == 2.0
        np.testing.assert_allclose(V_alpha(np.array([1.0, 9.0]), 1.0),
                                   [1.0, 3.0])

    def test_negative_raises(self):
        with pytest.raises(ValueError):
            V_alpha(-1.0, 1.0)


class TestGreenBrownian:
    def test_halfline(self):
        assert green_brownian(HALFLINE, 2.0, 5.0) == 2.0

    def test_interval_symmetry_and_value(self):
        dom = Interval(4.0)
        assert green_brownian(dom, 1.0, 3.0) == pytest.approx(0.75)
        assert green_brownian(dom, 3.0, 1.0) == pytest.approx(0.75)
        # Reflection through the midpoint.
        assert green_brownian(dom, 1.0, 3.0) == pytest.approx(
            green_brownian(dom, 3.0, 1.0))


class TestGreenStableHalfline:
    def test_brownian_limit(self):
        assert green_stable_halfline(1.0, 3.0, 2.0) == 1.0

    def test_symmetric_in_arguments(self):
        for a in (0.5, 1.0, 1.5):
            assert green_stable_halfline(1.0, 2.5, a) == pytest.approx(
                green_stable_halfline(2.5, 1.0, a), rel=1e-10)

    def test_quadrature_against_direct_integral(self):
        # Independent reimplementation without the w-substitution.
        a, x, y = 1.3, 0.7, 2.0
        d = abs(y - x)

        def f(u):
            return (u ** (a / 2.0 - 1.0)) * (d + u) ** (a / 2.0 - 1.0)

        ref, _ = adaptive_gauss(f, 1e-14, min(x, y), epsabs=1e-12,
                                epsrel=1e-10)
        ref *= a * a / 4.0
        assert green_stable_halfline(x, y, a) == pytest.approx(ref, rel=1e-7)

    def test_diagonal(self):
        assert green_stable_halfline(1.0, 1.0, 1.0) == math.inf
        # alpha > 1: (a^2/4) m^{a-1} / (a-1).
        got = green_stable_halfline(2.0, 2.0, 1.5)
        ref = (1.5 ** 2 / 4.0) * 2.0 ** 0.5 / 0.5
        assert got == pytest.approx(ref, rel=1e-12)

    def test_monotone_in_min_coordinate(self):
        vals = [green_stable_halfline(x, x + 1.0, 0.8)
                for x in (0.5, 1.0, 2.0, 4.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestGhat:
    def test_halfline_branches(self):
        # alpha = 2: V(x ^ y).
        assert ghat_stable(HALFLINE, 2.0, 3.0, 2.0) == 2.0
        # 1 < alpha < 2: min{(xy)^{(a-1)/2}, V(x)V(y)/|x-y|}.
        a = 1.5
        got = ghat_stable(HALFLINE, 1.0, 4.0, a)
        ref = min((1.0 * 4.0) ** 0.25, (1.0 * 8.0) / 3.0)
        assert got == pytest.approx(ref, rel=1e-12)
        # alpha = 1: log(1 + V(x)V(y)/V(d)^2).
        got = ghat_stable(HALFLINE, 1.0, 2.0, 1.0)
        assert got == pytest.approx(math.log1p(math.sqrt(2.0)), rel=1e-12)
        # alpha < 1: min{1, V V / V(d)^2} d^{a-1}.
        a = 0.5
        got = ghat_stable(HALFLINE, 1.0, 3.0, a)
        vv = 3.0 ** 0.25
        ref = min(1.0, vv / 2.0 ** 0.5) * 2.0 ** (-0.5)
        assert got == pytest.approx(ref, rel=1e-12)

    def test_interval_branches(self):
        dom = Interval(2.0)
        # alpha = 2 Brownian-profile product.
        got = ghat_stable(dom, 0.5, 1.0, 2.0)
        ref = min(0.5 * 1.0, 1.5 * 1.0) / 2.0
        assert got == pytest.approx(ref, rel=1e-12)
        # alpha = 1: log(1 + V(d(x))V(d(y))/|x-y|).
        got = ghat_stable(dom, 0.5, 1.0, 1.0)
        ref = math.log1p(math.sqrt(0.5) * 1.0 / 0.5)
        assert got == pytest.approx(ref, rel=1e-12)

    def test_interval_reflection_symmetry(self):
        dom = Interval(3.0)
        for a in (0.5, 1.0, 1.5, 2.0):
            lhs = ghat_stable(dom, 0.7, 1.2, a)
            rhs = ghat_stable(dom, 3.0 - 0.7, 3.0 - 1.2, a)
            assert lhs == pytest.approx(rhs, rel=1e-12), a

    def test_diagonal_divergence_low_alpha(self):
        assert ghat_stable(HALFLINE, 1.0, 1.0, 0.7) == math.inf
        assert ghat_stable(HALFLINE, 1.0, 1.0, 1.0) == math.inf
        assert math.isfinite(ghat_stable(HALFLINE, 1.0, 1.0, 1.5))

    def test_custom_renewal_callable(self, ren1):
        # Passing the geometric V gives the geometric profile.
        got = ghat(HALFLINE, 1.0, 2.0, ren1.value, 1.0)
        vv = ren1.value(1.0) * ren1.value(2.0)
        ref = math.log1p(vv / ren1.value(1.0) ** 2)
        assert got == pytest.approx(ref, rel=1e-10)


class TestPoissonStable:
    def test_resolved_constant_beta_integral(self):
        # int_0^oo u^{-a/2} / (1+u) du = pi / sin(pi a / 2), a Beta
        # integral, so the mass-one normalization forces
        # C_alpha = sin(pi alpha / 2) / pi.
        for a in (0.5, 1.0, 1.5):
            poisson_stable_halfline(1.0, -1.0, a)
            assert resolved_poisson_constants[a] == pytest.approx(
                math.sin(math.pi * a / 2.0) / math.pi, rel=1e-10), a

    def test_mass_is_one_alpha1(self):
        # Direct numerical closure at alpha = 1 (tails ~ e^{-20} at the
        # truncation points).
        def f(t):
            u = np.exp(t)
            vals = np.array([poisson_stable_halfline(1.0, -ui, 1.0)
                             for ui in u])
            return u * vals

        val, _ = adaptive_gauss(f, -40.0, 40.0, epsabs=1e-9, epsrel=1e-9)
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_scaling_in_x(self):
        # P(x, z) = x^{-1} P(1, z/x) by self-similarity.
        a = 1.2
        x, z = 3.0, -2.0
        lhs = poisson_stable_halfline(x, z, a)
        rhs = poisson_stable_halfline(1.0, z / x, a) / x
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_alpha2_rejected(self):
        with pytest.raises(ValueError):
            poisson_stable_halfline(1.0, -1.0, 2.0)

    def test_constant_alpha1_closed_form(self):
        # At alpha = 1 the normalizing integral is int_0^oo u^{-1/2}/(1+u)
        # du = pi, so C_1 = 1/pi.
        poisson_stable_halfline(1.0, -1.0, 1.0)
        assert resolved_poisson_constants[1.0] == pytest.approx(
            1.0 / math.pi, rel=1e-10)
