"""Smoke checks for halfline.py against independent references."""
import math
import time
import numpy as np

from geopot.halfline import get_halfline
from geopot.spectral import Mode
from geopot.stable_ref import green_stable_halfline


def check_stable_green():
    # Stable-mode green (convolution form, normalized V = x^{a/2}) must
    # reproduce the direct closed-ish form green_stable_halfline.
    for a in (0.5, 1.0, 1.5, 2.0):
        hp = get_halfline(a, Mode.STABLE)
        worst = 0.0
        for x in (0.03, 0.7, 1.0, 5.0, 40.0):
            for y in (0.01, 0.5, 1.0, 1.3, 8.0, 100.0):
                if x == y:
                    continue
                g = hp.green(x, y)
                ref = green_stable_halfline(x, y, a)
                rel = abs(g.value - ref) / ref
                worst = max(worst, rel)
                assert g.abs_error < 1e-4 * ref + 1e-15, (a, x, y, g)
        print(f"stable green a={a}: worst rel {worst:.2e}")


def check_batch_vs_scalar():
    for a, mode in ((1.0, Mode.GEOMETRIC), (0.5, Mode.GEOMETRIC),
                    (2.0, Mode.GEOMETRIC), (1.5, Mode.STABLE)):
        hp = get_halfline(a, mode)
        x = 0.8
        ys = np.array([1e-17, 1e-9, 1e-3, 0.2, 0.799, 0.8001, 1.1, 3.0,
                       50.0, 2e4])
        gb = hp.green_batch(x, ys)
        worst = 0.0
        for y, g in zip(ys, gb):
            ref = hp.green(x, y)
            rel = abs(g - ref.value) / ref.value
            worst = max(worst, rel)
        print(f"batch vs scalar a={a} {mode.name}: worst rel {worst:.2e}")
        assert worst < 2e-8, worst


def check_symmetry_domination():
    for a in (0.5, 1.0, 1.5, 2.0):
        hp = get_halfline(a, Mode.GEOMETRIC)
        worst = 0.0
        for x, y in ((0.2, 1.7), (1.0, 1.01), (0.01, 6.0), (3.0, 90.0)):
            g1 = hp.green(x, y).value
            g2 = hp.green(y, x).value
            worst = max(worst, abs(g1 - g2) / g1)
            ref = green_stable_halfline(x, y, a)
            assert g1 >= ref * (1 - 1e-9), (a, x, y, g1, ref)
        print(f"geom green a={a}: symmetry {worst:.2e}, dominates stable ok")


def check_poisson_mass():
    # For a < 2 the process cannot creep: exit position has full mass on
    # z < 0.  Integrate P(x, z) dz and compare to 1.
    from geopot.quadrature import adaptive_gauss
    for a, x in ((1.0, 1.0), (0.5, 0.3), (1.5, 2.0)):
        hp = get_halfline(a, Mode.GEOMETRIC)
        t0 = time.time()

        def f(s):
            out = np.empty_like(s)
            for i, si in enumerate(s):
                zz = -math.exp(si)
                out[i] = math.exp(si) * hp.poisson(x, zz).value
            return out

        # The exit law has a |z|^{-1-a/2} upper tail; size the range so the
        # truncated mass is well under the tolerance.
        S = min(44.0, 60.0 / a)
        val, err = adaptive_gauss(f, -16.0, S, epsabs=1e-6, epsrel=1e-6)
        dt = time.time() - t0
        print(f"poisson mass a={a} x={x}: {val:.8f} (quad err {err:.1e}, "
              f"{dt:.0f}s)")
        assert abs(val - 1.0) < 1e-4, val


def check_poisson_speed_band():
    for a in (0.5, 1.0, 1.5, 2.0):
        hp = get_halfline(a, Mode.GEOMETRIC)
        t0 = time.time()
        vals = []
        for x in (0.1, 1.0, 10.0):
            for z in (-0.1, -1.0, -10.0):
                p = hp.poisson(x, z)
                r = p.value / hp.poisson_comparator(x, z)
                vals.append(r)
                assert p.abs_error < 1e-5 * p.value + 1e-12, (a, x, z, p)
        dt = (time.time() - t0) / 9.0
        print(f"poisson a={a}: ratio band [{min(vals):.3f}, {max(vals):.3f}]"
              f" avg {dt*1e3:.0f} ms/eval")


def check_occupation():
    from scipy.integrate import quad
    for a, x, R in ((1.0, 0.5, 1.0), (0.5, 2.0, 1.0), (1.5, 1.0, 4.0),
                    (2.0, 1.0, 1.0), (1.0, 1.0, 1.0)):
        hp = get_halfline(a, Mode.GEOMETRIC)
        occ = hp.occupation(x, R)
        # Reference: plain quadrature away from the diagonal plus the
        # independent window-mass reduction across it.
        h = 1e-3 * min(1.0, x)
        g = lambda y: hp.green(x, y).value
        wm, wp, _ = hp._window_masses(x, h)
        if x < R:
            ref = (quad(g, 0.0, x - h, limit=300)[0] + wm + wp
                   + quad(g, x + h, R, limit=300)[0])
        elif x == R:
            ref = quad(g, 0.0, x - h, limit=300)[0] + wm
        else:
            ref = quad(g, 0.0, R, limit=300)[0]
        rel = abs(occ.value - ref) / ref
        print(f"occupation a={a} x={x} R={R}: {occ.value:.9f} vs "
              f"direct {ref:.9f} rel {rel:.2e}")
        assert rel < 2e-4, (occ, ref)
        v = hp.renewal.value
        if x <= R / 2:
            assert occ.value <= float(v(x)) * float(v(R)) * (1 + 1e-9)


if __name__ == "__main__":
    t0 = time.time()
    check_stable_green()
    check_batch_vs_scalar()
    check_symmetry_domination()
    check_occupation()
    check_poisson_speed_band()
    check_poisson_mass()
    print(f"total {time.time()-t0:.0f}s")
