"""Smoke checks for the simulation engine before tests are frozen."""

import math
import time

import numpy as np

from geopot.domains import HALFLINE, Interval
from geopot.montecarlo import (SimConfig, estimate_harmonic_measure,
                               estimate_occupation, run_exit,
                               sample_increment, _path_rng)
from geopot.spectral import Mode


def check_ecf():
    """Empirical characteristic function of one step vs the exact
    transform (1+|xi|^alpha)^{-t}, 4 sigma."""
    n = 400_000
    for alpha in (0.5, 1.0, 1.5, 2.0):
        for t in (0.1, 1.0):
            rng = _path_rng(12345, 0)
            dx = sample_increment(alpha, t, rng, size=n)
            for xi in (0.5, 1.0, 2.0):
                emp = np.cos(xi * dx)
                mean = emp.mean()
                sig = emp.std(ddof=1) / math.sqrt(n)
                exact = (1.0 + xi**alpha) ** (-t)
                z = (mean - exact) / sig
                status = "ok" if abs(z) < 4.0 else "FAIL"
                print(f"  ecf a={alpha} t={t} xi={xi}: emp={mean:.5f} "
                      f"exact={exact:.5f} z={z:+.2f} {status}")
                assert abs(z) < 4.0, (alpha, t, xi, mean, exact, z)
    # the worked example: xi=1, h=0.1, geometric, any alpha: 2^{-0.1}
    rng = _path_rng(7, 0)
    dx = sample_increment(1.5, 0.1, rng, size=n)
    got = float(np.cos(dx).mean())
    print(f"  worked example mean cos = {got:.5f} vs 2^-0.1 = {2**-0.1:.5f}")
    assert abs(got - 2**-0.1) < 4 * np.cos(dx).std() / math.sqrt(n)


def check_stable_mode_ecf():
    n = 200_000
    for alpha in (0.7, 1.0, 2.0):
        rng = _path_rng(99, 3)
        dx = sample_increment(alpha, 0.5, rng, mode=Mode.STABLE, size=n)
        emp = np.cos(1.3 * dx)
        exact = math.exp(-0.5 * 1.3**alpha)
        z = (emp.mean() - exact) / (emp.std(ddof=1) / math.sqrt(n))
        print(f"  stable-mode ecf a={alpha}: z={z:+.2f}")
        assert abs(z) < 4.0


def check_determinism():
    cfg = SimConfig(alpha=1.0, n_paths=6000, seed=42, step_h=1e-2)
    b1 = run_exit(cfg, Interval(2.0), 0.7)
    b2 = run_exit(cfg, Interval(2.0), 0.7)
    assert np.array_equal(b1.exit_time, b2.exit_time)
    assert np.array_equal(b1.exit_position, b2.exit_position)
    cfg4 = SimConfig(alpha=1.0, n_paths=6000, seed=42, step_h=1e-2,
                     workers=4)
    b4 = run_exit(cfg4, Interval(2.0), 0.7)
    same = (np.array_equal(b1.exit_time, b4.exit_time)
            and np.array_equal(b1.exit_position, b4.exit_position)
            and np.array_equal(b1.censored, b4.censored))
    print(f"  workers 1 vs 4 identical: {same}")
    assert same
    b_other = run_exit(SimConfig(alpha=1.0, n_paths=6000, seed=43,
                                 step_h=1e-2), Interval(2.0), 0.7)
    assert not np.array_equal(b1.exit_position, b_other.exit_position)
    print("  determinism ok (seed-sensitive, worker-invariant)")


def check_exit_envelope():
    """Mean interval exit time against the analytic sandwich."""
    from geopot.interval import get_interval
    for alpha in (0.5, 1.0, 2.0):
        pot = get_interval(alpha)
        R, x = 2.0, 0.7
        t0 = time.time()
        res = pot.exit_time_interval(R, x, n_paths=20_000, seed=5,
                                     step_h=1e-3)
        dt = time.time() - t0
        ok = res.lower <= res.mc_estimate <= res.upper
        print(f"  a={alpha}: mc={res.mc_estimate:.4f} "
              f"[{res.lower:.4f}, {res.upper:.4f}] ok={ok} ({dt:.1f}s)")
        assert ok


def check_occupation_vs_quadrature():
    """MC occupation of a window vs the integrated Green function."""
    from geopot.halfline import get_halfline
    from geopot.quadrature import adaptive_gauss
    alpha, x = 1.0, 0.5
    R = 40.0                      # wide interval proxies the half-line
    window = (0.8, 1.2)
    cfg = SimConfig(alpha=alpha, n_paths=30_000, seed=11, step_h=2e-3)
    mean, err = estimate_occupation(cfg, Interval(R), x, window)
    pot = get_halfline(alpha)
    ref, _ = adaptive_gauss(
        lambda y: np.array([pot.green(x, float(t)).value for t in y]),
        window[0], window[1], epsabs=1e-10, epsrel=1e-8)
    z = (mean - ref) / max(err, 1e-12)
    print(f"  occupation mc={mean:.5f}+-{err:.5f} quad={ref:.5f} z={z:+.2f}")
    assert abs(z) < 5.0


def check_harmonic_measure_sanity():
    alpha = 1.0
    cfg = SimConfig(alpha=alpha, n_paths=20_000, seed=3, step_h=2e-3)
    p, e = estimate_harmonic_measure(cfg, Interval(2.0), 1.0,
                                     [(-math.inf, 0.0)])
    print(f"  P(exit left) = {p:.4f} +- {e:.4f} (symmetry -> 0.5)")
    assert abs(p - 0.5) < 5 * e + 0.01


def check_csv_roundtrip(tmp="/tmp/_batch.csv"):
    from geopot.montecarlo import load_csv
    cfg = SimConfig(alpha=1.5, n_paths=50, seed=9, step_h=1e-2)
    b = run_exit(cfg, Interval(1.0), 0.4)
    b.to_csv(tmp)
    header, t, xpos, c = load_csv(tmp)
    assert header["seed"] == 9 and header["alpha"] == 1.5
    assert np.array_equal(t, b.exit_time)
    assert np.array_equal(xpos, b.exit_position)
    assert np.array_equal(c, b.censored)
    print("  csv round-trip ok")


def check_speed():
    cfg = SimConfig(alpha=1.0, n_paths=100_000, seed=1, step_h=1e-3)
    t0 = time.time()
    b = run_exit(cfg, Interval(2.0), 0.7)
    dt = time.time() - t0
    print(f"  1e5 paths, h=1e-3, interval: {dt:.1f}s "
          f"(censored {b.n_censored})")


if __name__ == "__main__":
    print("ecf:"); check_ecf()
    print("stable mode:"); check_stable_mode_ecf()
    print("determinism:"); check_determinism()
    print("exit envelope:"); check_exit_envelope()
    print("occupation:"); check_occupation_vs_quadrature()
    print("harmonic measure:"); check_harmonic_measure_sanity()
    print("csv:"); check_csv_roundtrip()
    print("speed:"); check_speed()
    print("all montecarlo smoke checks passed")
