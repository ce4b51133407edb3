import math

import numpy as np
import pytest

from geopot import Mode, get_renewal
from geopot.renewal import renewal_comparator, renewal_derivative_comparator


class TestGoldens:
    def test_value_matches_laplace_inversion(self, goldens):
        for key, ref in goldens["V"].items():
            a, x = (float(p) for p in key.split(":"))
            ren = get_renewal(a)
            v, e = ren.value_err(x)
            assert abs(v - float(ref)) <= e + 1e-12 * abs(v), key

    def test_value_accuracy_beats_reported_bound(self, goldens):
        # The reported bound is conservative; actual deviation from the
        # inversion oracle should sit well inside it.
        devs = []
        for key, ref in goldens["V"].items():
            a, x = (float(p) for p in key.split(":"))
            v, e = get_renewal(a).value_err(x)
            devs.append(abs(v / float(ref) - 1.0))
        assert max(devs) < 1e-6

    def test_derivative_matches_laplace_inversion(self, goldens):
        ren = get_renewal(1.0)
        for key, ref in goldens["Vprime"].items():
            _, x = (float(p) for p in key.split(":"))
            v, e = ren.derivative_err(x)
            assert abs(v - float(ref)) <= e + 1e-12 * abs(v), key
            assert abs(v / float(ref) - 1.0) < 1e-5, key


class TestShape:
    def test_zero_and_monotone(self, ren1):
        assert ren1.value(0.0) == 0.0
        xs = np.logspace(-8, 8, 160)
        vals = ren1.value(xs)
        assert np.all(np.diff(vals) > 0)
        assert np.all(ren1.derivative(xs) > 0)

    def test_subadditive_sample(self, ren1):
        rng = np.random.default_rng(5)
        x = 10.0 ** rng.uniform(-5, 5, 400)
        y = 10.0 ** rng.uniform(-5, 5, 400)
        slack = 3.0 * ren1.cache_rel_err + 1e-9
        lhs = ren1.value(x + y)
        rhs = ren1.value(x) + ren1.value(y)
        assert np.all(lhs <= rhs * (1.0 + slack))

    def test_inverse_round_trip(self, ren1):
        for x in (1e-4, 0.3, 2.0, 5e3):
            w = ren1.value(x)
            assert ren1.inverse(w) == pytest.approx(x, rel=1e-6)
        assert ren1.inverse(0.0) == 0.0

    def test_quadrature_agrees_with_table(self, ren1):
        for x in (0.05, 1.0, 40.0):
            direct = ren1.quad_value(x)[0]
            assert ren1.value(x) == pytest.approx(
                direct, rel=5.0 * ren1.cache_rel_err + 1e-8)


class TestStableMode:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
    def test_power_law(self, alpha):
        ren = get_renewal(alpha, Mode.STABLE)
        xs = np.logspace(-2, 2, 25)
        np.testing.assert_allclose(ren.value(xs), xs ** (alpha / 2.0),
                                   rtol=1e-5)

    def test_exact_oracle_is_exact(self):
        ren = get_renewal(1.0, Mode.STABLE, exact_oracle=True)
        assert ren.value(7.0) == pytest.approx(math.sqrt(7.0), rel=1e-14)


class TestComparators:
    def test_value_band_alpha1(self, ren1):
        xs = np.logspace(-3, 3, 61)
        ratio = ren1.value(xs) / renewal_comparator(1.0, xs)
        assert 0.95 < ratio.min() <= ratio.max() < 1.25

    def test_derivative_band_alpha1(self, ren1):
        xs = np.logspace(-3, 3, 61)
        ratio = ren1.derivative(xs) / renewal_derivative_comparator(1.0, xs)
        assert 0.08 < ratio.min() <= ratio.max() < 0.8

    def test_comparator_shapes(self):
        # V-comparator ~ sqrt(alpha log(1/x)) ^ -1/2 near zero and tends
        # to infinity at large x slower than any power.
        small = renewal_comparator(1.0, 1e-8)
        assert small == pytest.approx(
            1.0 / math.sqrt(math.log1p(1e8)), rel=1e-12)
