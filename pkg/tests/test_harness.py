import json
import math

import numpy as np
import pytest
from scipy.special import exp1

from geopot import (InequalityResult, RatioReport, emit, inequality_suite,
                    ratio_sweep, registered_ids)
from geopot.harness import (ALL_ESTIMATE_IDS, _assemble, _decade_stats,
                            _derive_seed, _levy_tail_mass, _REGISTRY,
                            assert_registry_complete, measure_C1, parse_grid)
from geopot.quadrature import adaptive_gauss
from geopot import get_levy_density


class TestRegistry:
    def test_ids_closed_world(self):
        assert registered_ids() == tuple(sorted(ALL_ESTIMATE_IDS))
        assert len(ALL_ESTIMATE_IDS) == 12
        assert_registry_complete()

    def test_backends_labelled(self):
        for spec in _REGISTRY.values():
            assert spec.backend in ("quadrature", "montecarlo")
        mc = [i for i in ALL_ESTIMATE_IDS
              if _REGISTRY[i].backend == "montecarlo"]
        assert sorted(mc) == ["green-interval-large-mc",
                              "green-interval-small-mc",
                              "poisson-interval-mc"]

    def test_unknown_id_rejected(self):
        with pytest.raises(KeyError, match="renewal-asymptotics"):
            ratio_sweep("no-such-estimate", 1.0)


class TestParseGrid:
    def test_log_grid(self):
        g = parse_grid("log:0.1:10:5")
        assert g.shape == (5,)
        assert g[0] == pytest.approx(0.1) and g[-1] == pytest.approx(10.0)
        assert np.allclose(np.diff(np.log(g)), np.log(10.0) / 2.0)

    def test_lin_grid(self):
        g = parse_grid("lin:0:2:5")
        np.testing.assert_allclose(g, [0.0, 0.5, 1.0, 1.5, 2.0])

    @pytest.mark.parametrize("bad", [
        "geo:1:2:3", "log:1:2", "log:2:1:5", "log:0:1:5", "lin:1:2:0",
    ])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_grid(bad)


class TestDeriveSeed:
    def test_distinct_and_stable(self):
        seeds = [_derive_seed(7, k) for k in range(200)]
        assert len(set(seeds)) == 200
        assert seeds == [_derive_seed(7, k) for k in range(200)]
        assert all(0 <= s < 2 ** 64 for s in seeds)


class TestAssemble:
    @staticmethod
    def _build(ratios, scales, band=(0.01, 100.0), err_frac=0.0):
        comp = np.ones(len(ratios))
        computed = np.asarray(ratios, dtype=float)
        errors = err_frac * np.abs(computed)
        points = [(float(s),) for s in scales]
        return _assemble("renewal-asymptotics", 1.0, "quadrature", band,
                         points, computed, comp, errors, scales)

    def test_flat_unit_ratio_passes(self):
        rep = self._build([1.0] * 6, [0.01, 0.1, 1, 10, 100, 1000])
        assert isinstance(rep, RatioReport)
        assert rep.inf_ratio == rep.sup_ratio == 1.0
        assert rep.adjacent_decade_factor == 1.0
        assert rep.spread == 1.0
        assert rep.passed

    def test_band_violation_fails(self):
        rep = self._build([0.5, 1.0], [1.0, 10.0], band=(0.9, 1.1))
        assert not rep.passed
        assert rep.inf_ratio == 0.5
        assert rep.arg_inf == [1.0]

    def test_large_errors_fail_even_in_band(self):
        rep = self._build([1.0, 1.0], [1.0, 10.0], err_frac=0.2)
        assert not rep.passed

    def test_decade_factor_tracks_extrema(self):
        rep = self._build([1.0, 3.0], [1.0, 10.0])
        assert rep.adjacent_decade_factor == pytest.approx(3.0)
        assert rep.per_decade_extrema == {"0": [1.0, 1.0],
                                          "1": [3.0, 3.0]}

    def test_infinite_rows_are_ignored(self):
        comp = np.array([1.0, 1.0, 0.0])
        computed = np.array([1.0, 1.0, 1.0])
        errors = np.zeros(3)
        rep = _assemble("renewal-asymptotics", 1.0, "quadrature",
                        (0.01, 100.0), [(1.0,), (2.0,), (3.0,)], computed,
                        comp, errors, [1.0, 2.0, 3.0])
        assert rep.sup_ratio == 1.0 and rep.passed

    def test_all_infinite_raises(self):
        with pytest.raises(RuntimeError):
            _assemble("renewal-asymptotics", 1.0, "quadrature",
                      (0.01, 100.0), [(1.0,)], np.array([1.0]),
                      np.array([0.0]), np.zeros(1), [1.0])


class TestRatioSweeps:
    def test_quadrature_sweep_small_grid(self):
        rep = ratio_sweep("renewal-asymptotics", 1.0, grid="log:0.1:10:7")
        assert rep.backend == "quadrature"
        assert len(rep.ratio) == 7
        assert rep.passed
        assert 0.01 <= rep.inf_ratio <= rep.sup_ratio <= 100.0

    def test_band_override_can_fail_honestly(self):
        rep = ratio_sweep("renewal-asymptotics", 1.0,
                          grid="log:0.1:10:5", band=(0.999, 1.001))
        assert not rep.passed


class TestLevyTailMass:
    def test_brownian_case_is_exponential_integral(self):
        for s in (0.1, 1.0, 5.0):
            assert _levy_tail_mass(2.0, s) == pytest.approx(
                float(exp1(s)), rel=1e-12)

    def test_far_tail_matches_power_law(self):
        # At large cut the jump density is k1 t^{-1-alpha} up to lower
        # order terms, so the tail mass approaches k1 s^-alpha / alpha.
        got = _levy_tail_mass(1.0, 1e5)
        assert got == pytest.approx(1.0 / (math.pi * 1e5), rel=1e-3)

    def test_agrees_with_direct_window_plus_tail(self):
        nu = get_levy_density(1.0)
        s = 0.7
        win, _ = adaptive_gauss(lambda t: np.asarray(nu(t)), s, 1e5,
                                epsabs=0.0, epsrel=1e-10)
        approx_tail = 1.0 / (math.pi * 1e5)
        assert _levy_tail_mass(1.0, s) == pytest.approx(
            win + approx_tail, rel=1e-6)

    def test_monotone_in_cut(self):
        vals = [_levy_tail_mass(1.5, s) for s in (0.5, 1.0, 2.0, 4.0)]
        assert all(b < a for a, b in zip(vals, vals[1:]))


class TestInequalitySuite:
    def test_structure_and_quadrature_entries(self):
        results = inequality_suite(2.0, n_paths=1500, seed=0,
                                   include_c1_bounds=False)
        assert len(results) == 10
        assert all(isinstance(r, InequalityResult) for r in results)
        by_name = {r.name: r for r in results}
        assert len(by_name) == 10
        for r in results:
            assert r.status in ("pass", "fail", "skipped")
            assert isinstance(r.detail, dict)
        skipped = {n for n, r in by_name.items() if r.status == "skipped"}
        assert skipped == {"exit-above-probability-lower",
                           "exit-time-lower",
                           "exit-time-upper-degenerate"}
        # Deterministic quadrature checks cannot be MC-unlucky and must
        # pass outright.
        for name in ("renewal-subadditivity",
                     "renewal-integral-mean-sandwich",
                     "green-stable-domination",
                     "occupation-halfline-bound"):
            r = by_name[name]
            assert r.status == "pass", (name, r.detail)
            assert r.margin >= 0.0


class TestMeasureC1:
    def test_survival_constant_in_range(self):
        c1, rows = measure_C1(2.0, n_paths=1500, return_details=True)
        assert 0.0 < c1 <= 1.05
        assert len(rows) == 12
        for row in rows:
            assert 0.0 <= row["survival"] <= 1.0
            assert row["envelope"] > 0.0
            assert row["ratio"] >= 0.0


class TestEmit:
    @staticmethod
    def _report():
        scales = [0.1, 1.0, 10.0]
        comp = np.ones(3)
        return _assemble("renewal-asymptotics", 1.0, "quadrature",
                         (0.01, 100.0), [(s,) for s in scales],
                         np.array([0.9, 1.0, 1.1]), comp, np.zeros(3),
                         scales)

    def test_json_round_trip(self, tmp_path):
        rep = self._report()
        path = emit(rep, "json", str(tmp_path / "r.json"))
        with open(path) as fh:
            data = json.load(fh)
        assert data["estimate_id"] == "renewal-asymptotics"
        assert data["ratio"] == [0.9, 1.0, 1.1]
        assert data["passed"] is True

    def test_json_bytes_deterministic(self, tmp_path):
        rep = self._report()
        p1 = emit(rep, "json", str(tmp_path / "a.json"))
        p2 = emit(rep, "json", str(tmp_path / "b.json"))
        with open(p1, "rb") as f1, open(p2, "rb") as f2:
            assert f1.read() == f2.read()

    def test_infinities_serializable(self, tmp_path):
        comp = np.array([1.0, 0.0])
        rep = _assemble("renewal-asymptotics", 1.0, "quadrature",
                        (0.01, 100.0), [(1.0,), (2.0,)],
                        np.array([1.0, 1.0]), comp, np.zeros(2),
                        [1.0, 2.0])
        path = emit(rep, "json", str(tmp_path / "inf.json"))
        with open(path) as fh:
            data = json.load(fh)
        assert data["ratio"] == [1.0, "inf"]

    def test_csv_layout(self, tmp_path):
        rep = self._report()
        path = emit(rep, "csv", str(tmp_path / "r.csv"))
        lines = open(path).read().splitlines()
        meta = [ln for ln in lines if ln.startswith("# ")]
        assert any(ln.startswith("# estimate_id=") for ln in meta)
        header = lines[len(meta)]
        assert header.split(",")[:1] == ["p0"]
        rows = lines[len(meta) + 1:]
        assert len(rows) == 3
        assert float(rows[0].split(",")[1]) == 0.9

    def test_inequality_list_csv(self, tmp_path):
        results = [InequalityResult("demo", "pass", {"k": 1}, 0.5)]
        path = emit(results, "csv", str(tmp_path / "ineq.csv"))
        lines = open(path).read().splitlines()
        assert lines[0] == "name,status,margin,detail"
        assert lines[1].startswith("demo,pass,0.5,")

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit(self._report(), "yaml", str(tmp_path / "x"))
