import math

import numpy as np
import pytest

from geopot import Mode, SimConfig, run_exit, sample_increment
from geopot.domains import HALFLINE, Interval
from geopot.montecarlo import (bias_probe, default_step,
                               estimate_harmonic_measure, load_csv,
                               _resolve_workers)


class TestSimConfig:
    def test_defaults(self):
        cfg = SimConfig(alpha=1.0)
        assert cfg.n_paths == 10_000 and cfg.seed == 0
        assert cfg.step_h is None and cfg.max_time is None

    @pytest.mark.parametrize("bad", [
        dict(alpha=0.0), dict(alpha=2.5), dict(alpha=-1.0),
        dict(alpha=1.0, n_paths=0),
        dict(alpha=1.0, step_h=0.0),
        dict(alpha=1.0, max_time=-1.0),
    ])
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            SimConfig(**bad)


class TestSampleIncrement:
    def test_scalar_and_vector_forms(self):
        rng = np.random.default_rng(0)
        x = sample_increment(1.5, 0.5, rng)
        assert isinstance(x, float)
        v = sample_increment(1.5, 0.5, rng, size=7)
        assert v.shape == (7,)

    def test_rejects_nonpositive_step(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            sample_increment(1.0, 0.0, rng)

    @pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0])
    @pytest.mark.parametrize("t", [0.1, 1.0])
    def test_characteristic_function_geometric(self, alpha, t):
        # E cos(xi X_t) = (1 + |xi|^alpha)^(-t); four-sigma gate on the
        # empirical mean at a fixed seed.
        n = 200_000
        rng = np.random.default_rng(12345)
        x = sample_increment(alpha, t, rng, size=n)
        for xi in (0.5, 1.0, 2.0):
            c = np.cos(xi * x)
            target = (1.0 + xi ** alpha) ** (-t)
            z = (np.mean(c) - target) / (np.std(c, ddof=1) / math.sqrt(n))
            assert abs(z) < 4.0, (alpha, t, xi, z)

    @pytest.mark.parametrize("alpha", [0.7, 2.0])
    def test_characteristic_function_stable(self, alpha):
        # Stable mode keeps the subordinator deterministic, so the law
        # is exactly alpha-stable: E cos(xi X_t) = exp(-t |xi|^alpha).
        n = 200_000
        t = 0.8
        rng = np.random.default_rng(999)
        x = sample_increment(alpha, t, rng, size=n, mode=Mode.STABLE)
        for xi in (0.5, 1.5):
            c = np.cos(xi * x)
            target = math.exp(-t * xi ** alpha)
            z = (np.mean(c) - target) / (np.std(c, ddof=1) / math.sqrt(n))
            assert abs(z) < 4.0, (alpha, xi, z)


class TestDefaultStep:
    def test_clamped_to_bounds(self):
        # A large interval pushes the raw scale far above the cap.  For
        # the floor, the stable reference with V(x) = x^(alpha/2) gives
        # a scale of 1e-4 at x = 1e-4, well under the 1e-6 threshold.
        assert default_step(1.0, Interval(100.0), 50.0) == 1e-2
        assert default_step(1.0, HALFLINE, 1e-4, Mode.STABLE) == 1e-6

    def test_interior_value_uses_envelope(self):
        from geopot import get_renewal
        v = get_renewal(1.0).value
        got = default_step(1.0, Interval(2.0), 0.5)
        want = 1e-3 * float(v(0.5)) * float(v(2.0))
        assert got == pytest.approx(want, rel=1e-12)


class TestResolveWorkers:
    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("GEOPOT_THREADS", "2")
        assert _resolve_workers(8) == 2
        monkeypatch.setenv("GEOPOT_THREADS", "junk")
        assert _resolve_workers(8) == 8
        monkeypatch.delenv("GEOPOT_THREADS")
        assert _resolve_workers(None) == 1


class TestRunExit:
    def test_basic_interval_batch(self):
        cfg = SimConfig(alpha=1.5, n_paths=500, seed=4)
        batch = run_exit(cfg, Interval(2.0), 1.0)
        live = ~batch.censored
        assert live.any()
        pos = batch.exit_position[live]
        assert np.all((pos <= 0.0) | (pos >= 2.0))
        assert np.all(batch.exit_time > 0.0)
        steps = batch.exit_time / batch.h
        assert np.allclose(steps, np.round(steps))

    def test_worker_count_invariance(self):
        kw = dict(alpha=1.5, n_paths=6000, seed=3)
        b1 = run_exit(SimConfig(workers=1, **kw), Interval(2.0), 1.0)
        b4 = run_exit(SimConfig(workers=4, **kw), Interval(2.0), 1.0)
        assert b1.h == b4.h
        np.testing.assert_array_equal(b1.exit_time, b4.exit_time)
        np.testing.assert_array_equal(b1.exit_position, b4.exit_position)
        np.testing.assert_array_equal(b1.censored, b4.censored)

    def test_seed_changes_paths(self):
        base = dict(alpha=1.0, n_paths=64)
        a = run_exit(SimConfig(seed=0, **base), Interval(1.0), 0.5)
        b = run_exit(SimConfig(seed=1, **base), Interval(1.0), 0.5)
        assert not np.array_equal(a.exit_time, b.exit_time)

    def test_path_streams_are_prefix_stable(self):
        # Path i depends only on (seed, i), so growing the batch must
        # not disturb the paths already drawn.
        big = run_exit(SimConfig(alpha=1.0, n_paths=5, seed=11),
                       Interval(1.0), 0.5)
        small = run_exit(SimConfig(alpha=1.0, n_paths=3, seed=11),
                         Interval(1.0), 0.5)
        np.testing.assert_array_equal(big.exit_time[:3], small.exit_time)
        np.testing.assert_array_equal(big.exit_position[:3],
                                      small.exit_position)

    def test_start_outside_domain_rejected(self):
        cfg = SimConfig(alpha=1.0, n_paths=8)
        with pytest.raises(ValueError):
            run_exit(cfg, Interval(1.0), 1.0)
        with pytest.raises(ValueError):
            run_exit(cfg, HALFLINE, -0.5)

    def test_window_outside_domain_rejected(self):
        cfg = SimConfig(alpha=1.0, n_paths=8)
        with pytest.raises(ValueError):
            run_exit(cfg, Interval(1.0), 0.5, windows=[(0.5, 1.5)])

    def test_heavy_censoring_warns(self):
        cfg = SimConfig(alpha=1.0, n_paths=256, seed=0, step_h=1e-3,
                        max_time=0.01)
        with pytest.warns(RuntimeWarning, match="censored"):
            batch = run_exit(cfg, HALFLINE, 5.0)
        assert batch.high_censoring
        assert batch.n_censored > batch.exit_time.size // 2
        # Censored rows report the cap, not an exit.
        assert np.all(batch.exit_time[batch.censored]
                      >= batch.max_time - batch.h)

    def test_occupation_column_bounded_by_exit_time(self):
        cfg = SimConfig(alpha=1.5, n_paths=400, seed=2)
        batch = run_exit(cfg, Interval(2.0), 1.0, windows=[(0.5, 1.5)])
        occ = batch.occupation[:, 0]
        assert occ.shape == (400,)
        assert np.all(occ >= 0.0)
        assert np.all(occ <= batch.exit_time + batch.h)


class TestEstimators:
    def test_harmonic_measure_symmetry(self):
        # From the center of an interval the symmetric process exits
        # upward with probability exactly 1/2.
        cfg = SimConfig(alpha=1.0, n_paths=20_000, seed=5)
        p, err = estimate_harmonic_measure(cfg, Interval(1.0), 0.5,
                                           [(1.0, np.inf)])
        assert err > 0.0
        assert abs(p - 0.5) < 4.0 * err + 0.01


class TestBiasProbe:
    def test_rows_and_drift(self):
        cfg = SimConfig(alpha=1.0, n_paths=8)
        rows = bias_probe(cfg, [4e-3, 2e-3, 1e-3],
                          lambda c: (10.0 * c.step_h, 0.0))
        assert [r["h"] for r in rows] == [4e-3, 2e-3, 1e-3]
        assert rows[-1]["drift"] == 0.0
        assert rows[0]["drift"] == pytest.approx(10.0 * 3e-3)

    def test_requires_decreasing_steps(self):
        cfg = SimConfig(alpha=1.0, n_paths=8)
        with pytest.raises(ValueError):
            bias_probe(cfg, [1e-3, 1e-3], lambda c: (0.0, 0.0))


class TestCsvRoundTrip:
    def test_header_data_and_extra(self, tmp_path):
        cfg = SimConfig(alpha=1.5, n_paths=200, seed=9)
        batch = run_exit(cfg, Interval(2.0), 0.75)
        out = tmp_path / "batch.csv"
        batch.to_csv(str(out), extra={"manifest": "deadbeef"})
        header, t, x, c = load_csv(str(out))
        assert header["alpha"] == 1.5
        assert header["n_paths"] == 200
        assert header["seed"] == 9
        assert header["manifest"] == "deadbeef"
        np.testing.assert_allclose(t, batch.exit_time, rtol=0, atol=0)
        np.testing.assert_allclose(x, batch.exit_position, rtol=1e-17)
        np.testing.assert_array_equal(c, batch.censored)

    def test_bytes_deterministic(self, tmp_path):
        cfg = SimConfig(alpha=1.0, n_paths=150, seed=1)
        batch = run_exit(cfg, Interval(1.0), 0.5)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        batch.to_csv(str(p1))
        batch.to_csv(str(p2))
        assert p1.read_bytes() == p2.read_bytes()
