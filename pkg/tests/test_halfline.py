import math

import numpy as np
import pytest

from geopot import Mode, get_halfline
from geopot.halfline import KernelValue, Method
from geopot.quadrature import adaptive_gauss
from geopot.stable_ref import green_stable_halfline, poisson_stable_halfline


class TestKernelValue:
    def test_float_protocol(self):
        kv = KernelValue(1.5, 1e-9, Method.QUADRATURE)
        assert float(kv) == 1.5


class TestGreen:
    def test_against_inversion_golden(self, hp1, goldens):
        ref = float(goldens["green_halfline"]["1:1:2"])
        kv = hp1.green(1.0, 2.0)
        assert kv.value == pytest.approx(ref, rel=1e-6)

    def test_symmetric(self, hp1):
        a = hp1.green(0.7, 2.2)
        b = hp1.green(2.2, 0.7)
        assert a.value == b.value

    def test_diagonal_sentinel(self, hp1):
        kv = hp1.green(1.0, 1.0)
        assert kv.value == math.inf and kv.abs_error == math.inf

    def test_domain_validation(self, hp1):
        with pytest.raises(ValueError):
            hp1.green(-1.0, 2.0)
        with pytest.raises(ValueError):
            hp1.green(1.0, 0.0)

    def test_batch_matches_pointwise(self, hp1):
        ys = np.array([0.3, 0.9, 1.7, 6.0])
        batch = hp1.green_batch(1.2, ys)
        for y, g in zip(ys, batch):
            kv = hp1.green(1.2, float(y))
            assert g == pytest.approx(kv.value, rel=1e-6), y

    def test_stable_mode_reproduces_closed_form(self):
        hp = get_halfline(1.0, Mode.STABLE)
        for x, y in ((0.5, 1.0), (1.0, 3.0), (2.0, 2.5)):
            ref = green_stable_halfline(x, y, 1.0)
            kv = hp.green(x, y)
            assert kv.value == pytest.approx(ref, rel=1e-8), (x, y)

    def test_error_bound_contains_golden(self, hp1, goldens):
        ref = float(goldens["green_halfline"]["1:1:2"])
        kv = hp1.green(1.0, 2.0)
        assert abs(kv.value - ref) <= kv.abs_error + 1e-6 * ref


class TestGreenComparator:
    def test_band_near_and_far(self, hp1):
        # Frozen from the measured sweep at alpha = 1: ratios live well
        # inside [0.3, 0.8] over the default grid.
        pts = [(0.1, 0.13), (1.0, 1.5), (1.0, 30.0), (20.0, 21.0)]
        for x, y in pts:
            ratio = hp1.green(x, y).value / hp1.green_comparator(x, y)
            assert 0.2 < ratio < 1.2, (x, y)

    def test_symmetric(self, hp1):
        assert hp1.green_comparator(0.7, 2.0) == pytest.approx(
            hp1.green_comparator(2.0, 0.7), rel=1e-12)


class TestPoisson:
    def test_mass_identity(self, hp1):
        # The process leaves (0, oo) by a downward jump with probability
        # one, so the exit density must integrate to 1 over z < 0.
        def f(t):
            u = np.exp(t)
            vals = np.array([hp1.poisson(1.0, -ui).value for ui in u])
            return u * vals

        mass, _ = adaptive_gauss(f, -30.0, 30.0, epsabs=1e-7, epsrel=1e-7)
        assert mass == pytest.approx(1.0, abs=2e-5)

    def test_stable_mode_matches_closed_form(self):
        hp = get_halfline(1.0, Mode.STABLE)
        for x, z in ((1.0, -0.5), (1.0, -2.0), (3.0, -0.2)):
            ref = poisson_stable_halfline(x, z, 1.0)
            kv = hp.poisson(x, z)
            assert kv.value == pytest.approx(ref, rel=1e-4), (x, z)

    def test_domain_validation(self, hp1):
        with pytest.raises(ValueError):
            hp1.poisson(1.0, 0.5)
        with pytest.raises(ValueError):
            hp1.poisson(-1.0, -0.5)

    def test_comparator_band(self, hp1):
        for x, z in ((1.0, -0.5), (1.0, -4.0), (0.2, -0.1)):
            ratio = hp1.poisson(x, z).value / hp1.poisson_comparator(x, z)
            assert 0.1 < ratio < 1.5, (x, z)


class TestOccupation:
    def test_matches_green_window_mass(self, hp1):
        # Expected time in (a, b] equals the integral of the Green
        # function over the window; the window avoids the diagonal.
        a, b = 2.0, 3.0
        win, _ = adaptive_gauss(lambda ys: hp1.green_batch(1.0, ys), a, b,
                                epsabs=1e-10, epsrel=1e-8)
        via_occ = hp1.occupation(1.0, b).value - hp1.occupation(1.0, a).value
        assert via_occ == pytest.approx(win, rel=1e-5)

    def test_monotone_in_r(self, hp1):
        vals = [hp1.occupation(1.0, r).value for r in (0.5, 1.0, 2.0, 8.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_remark_occupation_bound(self, hp1):
        # int_0^R G(x, y) dy <= V(x) V(R) for x <= R/2.
        v = hp1.renewal.value
        for x, r in ((0.5, 2.0), (1.0, 8.0)):
            occ = hp1.occupation(x, r).value
            assert occ <= float(v(x)) * float(v(r)) * (1.0 + 1e-7), (x, r)


class TestExitEnvelopes:
    def test_exit_time_bounds_structure(self, hp1):
        v = hp1.renewal.value
        lo, hi = hp1.exit_time_bounds(0.5, 2.0, c1=1.0)
        env = float(v(0.5)) * float(v(2.0))
        assert hi == pytest.approx(env, rel=1e-12)
        assert lo == pytest.approx(env / 16.0, rel=1e-12)
        # c1 scales the lower end quartically.
        lo2, hi2 = hp1.exit_time_bounds(0.5, 2.0, c1=0.5)
        assert hi2 == hi
        assert lo2 == pytest.approx(lo * 0.5 ** 4, rel=1e-12)

    def test_exit_time_bounds_use_nearest_boundary(self, hp1):
        # x and R - x are interchangeable.
        assert hp1.exit_time_bounds(0.3, 2.0) == hp1.exit_time_bounds(
            1.7, 2.0)

    def test_exit_prob_bounds_structure(self, hp1):
        v = hp1.renewal.value
        lo, hi = hp1.exit_prob_bounds(0.5, 2.0, c1=1.0)
        ratio = float(v(0.5)) / float(v(2.0))
        assert hi == pytest.approx(ratio, rel=1e-12)
        assert lo == pytest.approx(ratio / 4.0, rel=1e-12)
        assert 0.0 < lo <= hi <= 1.0

    def test_survival_lower_shape(self, hp1):
        v = hp1.renewal.value
        assert hp1.survival_lower(4.0, 0.01) == 1.0
        got = hp1.survival_lower(0.3, 9.0)
        assert got == pytest.approx(float(v(0.3)) / 3.0, rel=1e-12)
