import math

import numpy as np
import pytest

from geopot.spectral import (
    LadderExponent,
    Mode,
    ProcessSpec,
    drift_coefficient,
    laplace_exponent,
    levy_exponent,
    log_levy_exponent,
    spectral_weight,
)


class TestProcessSpec:
    def test_alpha_bounds(self):
        for bad in (0.0, -1.0, 2.1):
            with pytest.raises(ValueError):
                ProcessSpec(alpha=bad)

    def test_geometric_gap_below_two(self):
        # Spectral mass spreads over too many decades for double precision
        # there; exactly 2 stays supported.
        with pytest.raises(ValueError):
            ProcessSpec(alpha=1.97)
        ProcessSpec(alpha=2.0)
        ProcessSpec(alpha=1.95)
        ProcessSpec(alpha=1.97, mode=Mode.STABLE)

    def test_brownian_limit_flag(self):
        assert ProcessSpec(alpha=2.0).is_brownian_limit
        assert not ProcessSpec(alpha=1.0).is_brownian_limit


class TestExponents:
    def test_laplace_exponent_values(self):
        spec = ProcessSpec(alpha=1.0)
        assert laplace_exponent(spec, 4.0) == pytest.approx(math.log(3.0))
        stable = ProcessSpec(alpha=1.0, mode=Mode.STABLE)
        assert laplace_exponent(stable, 4.0) == pytest.approx(2.0)

    def test_levy_exponent_even_and_monotone(self):
        spec = ProcessSpec(alpha=1.5)
        xs = np.array([0.3, 1.0, 7.0])
        np.testing.assert_allclose(levy_exponent(spec, -xs),
                                   levy_exponent(spec, xs), rtol=1e-14)
        vals = levy_exponent(spec, xs)
        assert np.all(np.diff(vals) > 0)

    def test_levy_exponent_closed_form(self):
        spec = ProcessSpec(alpha=0.5)
        assert levy_exponent(spec, 3.0) == pytest.approx(
            math.log1p(3.0 ** 0.5), rel=1e-12)

    def test_log_levy_exponent_extreme_arguments(self):
        spec = ProcessSpec(alpha=1.0)
        # log Psi(e^t): at t = 100, Psi ~ t; at t = -100, Psi ~ e^t.
        assert log_levy_exponent(spec, 100.0) == pytest.approx(
            math.log(100.0), rel=1e-10)
        assert log_levy_exponent(spec, -100.0) == pytest.approx(
            -100.0, rel=1e-12)
        assert np.all(np.isfinite(log_levy_exponent(
            spec, np.array([-700.0, 0.0, 700.0]))))

    def test_drift_only_at_two(self):
        assert drift_coefficient(ProcessSpec(alpha=2.0)) == 1.0
        assert drift_coefficient(ProcessSpec(alpha=1.5)) == 0.0

    def test_spectral_weight_alpha2_support(self):
        spec = ProcessSpec(alpha=2.0)
        assert spectral_weight(spec, 0.5) == 0.0
        assert spectral_weight(spec, 2.0) == pytest.approx(
            math.pi / (math.pi ** 2 + math.log(3.0) ** 2), rel=1e-12)

    def test_spectral_weight_stable(self):
        spec = ProcessSpec(alpha=1.0, mode=Mode.STABLE)
        assert spectral_weight(spec, 2.0) == pytest.approx(0.5, rel=1e-12)


class TestLadderExponent:
    @pytest.fixture(scope="class")
    def ladders(self):
        # Shared through the renewal registry: these tables are expensive
        # and every other module needs the same four.
        from geopot import get_renewal
        return {a: get_renewal(a).ladder for a in (0.5, 1.0, 1.5, 2.0)}

    def test_against_goldens(self, ladders, goldens):
        for key, ref in goldens["psi_dagger"].items():
            a, xi = (float(p) for p in key.split(":"))
            lad = ladders[a]
            tol = 5.0 * (lad.table_rel_err + 1e-10)
            assert lad(xi) == pytest.approx(float(ref), rel=tol), key

    def test_direct_matches_table(self, ladders):
        lad = ladders[1.0]
        for xi in (0.03, 1.0, 250.0):
            val, err = lad.direct(xi)
            assert lad(xi) == pytest.approx(val,
                                            rel=5.0 * lad.table_rel_err)
            assert err < 1e-8 * max(1.0, val)

    def test_monotone_and_zero_limit(self, ladders):
        lad = ladders[1.5]
        xs = np.logspace(-8, 8, 120)
        vals = lad(xs)
        assert np.all(np.diff(vals) > 0)
        assert lad(1e-12) < 1e-5

    def test_stable_mode_closed_form(self):
        for a in (0.5, 1.0, 1.5, 2.0):
            lad = LadderExponent(ProcessSpec(alpha=a, mode=Mode.STABLE))
            for xi in (0.01, 1.0, 100.0):
                assert lad(xi) == pytest.approx(xi ** (a / 2.0), rel=1e-6)

    def test_comparability_with_sqrt_log(self, ladders):
        # psi^+(xi) tracks sqrt(log(1 + xi^alpha)) within a modest band.
        lad = ladders[1.0]
        xs = np.logspace(-3, 3, 61)
        ratio = lad(xs) / np.sqrt(np.log1p(xs))
        assert 0.85 < ratio.min() <= ratio.max() < 1.05

    def test_asymptotic_log_tracks_table(self, ladders):
        # The far expansion must splice smoothly onto the table well inside
        # the table's upper range.
        lad = ladders[1.0]
        for t in (220.0, 255.0):
            assert abs(lad.asymptotic_log(t) - lad.log_value(t)) < 1e-6
