"""Classical reference kernels of the pure stable process.

With the renewal function normalized to V(x) = x^{alpha/2}, the stable
process admits closed or near-closed forms for everything this package
computes numerically in the geometric case: the Brownian Green functions
of the half-line and interval, the stable half-line Green function as a
one-dimensional convolution of renewal densities, the piecewise power
comparator profiles, and the half-line Poisson kernel.  These serve two
roles: oracles that validate the quadrature machinery (which reproduces
them when run in stable mode), and the comparator profiles appearing in
every two-sided estimate for the geometric process.

The Poisson normalization constant is deliberately not imported from
literature.  It is resolved by requiring the kernel to integrate to the
probability of exiting the half-line downward, which is one for the
symmetric stable process (no creeping, no boundary atom); the resolved
values are recorded in ``resolved_poisson_constants`` so tests can compare
them against independently derived values.
"""

from __future__ import annotations

import math
import threading

import numpy as np

from .domains import HALFLINE, HalfLine, Interval
from .quadrature import adaptive_gauss

_PI = math.pi


def V_alpha(x, alpha: float):
    """Renewal function x^{alpha/2} of the normalized stable process."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("V_alpha is defined for x >= 0")
    out = x ** (alpha / 2.0)
    return float(out) if out.ndim == 0 else out


def green_brownian(domain: HalfLine | Interval, x: float, y: float) -> float:
    """Green function of Brownian motion at twice the usual speed.

    Half-line: x ^ y.  Interval (0, R): (x (R - y) ^ y (R - x)) / R.
    """
    x, y = float(x), float(y)
    if isinstance(domain, HalfLine):
        if x < 0.0 or y < 0.0:
            raise ValueError("green_brownian needs x, y >= 0")
        return min(x, y)
    R = domain.R
    if not (0.0 <= x <= R and 0.0 <= y <= R):
        raise ValueError("green_brownian needs x, y in [0, R]")
    return min(x * (R - y), y * (R - x)) / R


def green_stable_halfline(x: float, y: float, alpha: float) -> float:
    """Half-line Green function of the stable process.

    Equal to (alpha^2/4) int_0^{x^y} u^{alpha/2-1} (|y-x|+u)^{alpha/2-1} du,
    the general renewal-density convolution evaluated on V(x) = x^{alpha/2}.
    The substitution w = u^{alpha/2} removes the edge singularity.  On the
    diagonal the integral is divergent for alpha <= 1 and +inf is returned.
    """
    x, y = float(x), float(y)
    a = float(alpha)
    if x <= 0.0 or y <= 0.0:
        raise ValueError("green_stable_halfline needs x, y > 0")
    if a == 2.0:
        return min(x, y)
    m = min(x, y)
    d = abs(y - x)
    if d == 0.0:
        if a <= 1.0:
            return math.inf
        return (a * a / 4.0) * m ** (a - 1.0) / (a - 1.0)

    def f(w):
        w = np.asarray(w, dtype=float)
        return (d + w ** (2.0 / a)) ** (a / 2.0 - 1.0)

    val, _ = adaptive_gauss(f, 0.0, m ** (a / 2.0), epsabs=1e-14,
                            epsrel=1e-12)
    return (a / 2.0) * val


def ghat(domain: HalfLine | Interval, x: float, y: float, V,
         alpha: float) -> float:
    """Piecewise comparator profile built from a renewal function V.

    The half-line profile, branching on alpha:

        alpha = 2:      V(x ^ y)
        1 < alpha < 2:  min{ (x y)^{(alpha-1)/2}, V(x) V(y) / |x-y| }
        alpha = 1:      ln(1 + V(x) V(y) / V(|x-y|)^2)
        alpha < 1:      min{ 1, V(x) V(y) / V(|x-y|)^2 } |x-y|^{alpha-1}

    and on the interval (0, R), writing d(x) = x ^ (R - x):

        alpha < 1:      min{ |x-y|^{alpha-1}, V(d(x)) V(d(y)) / |x-y| }
        alpha = 1:      ln(1 + V(d(x)) V(d(y)) / |x-y|)
        1 < alpha < 2:  min{ V(d(x)) V(d(y)) / (d(x) d(y))^{1/2},
                             V(d(x)) V(d(y)) / |x-y| }
        alpha = 2:      (V(x) V(R-y) ^ V(R-x) V(y)) / R

    Diagonal values are +inf wherever the defining branch diverges
    (alpha <= 1 with x = y).  V is any callable renewal function; passing
    the geometric V gives the geometric comparators, passing V_alpha the
    stable ones.
    """
    x, y = float(x), float(y)
    a = float(alpha)
    d = abs(x - y)
    if isinstance(domain, HalfLine):
        if x <= 0.0 or y <= 0.0:
            raise ValueError("ghat on the half-line needs x, y > 0")
        if a == 2.0:
            return float(V(min(x, y)))
        if a > 1.0:
            first = (x * y) ** ((a - 1.0) / 2.0)
            if d == 0.0:
                return first
            return min(first, float(V(x)) * float(V(y)) / d)
        vv = float(V(x)) * float(V(y))
        if d == 0.0:
            return math.inf
        vd2 = float(V(d)) ** 2
        if a == 1.0:
            return math.log1p(vv / vd2)
        return min(1.0, vv / vd2) * d ** (a - 1.0)
    R = domain.R
    if not (x in domain and y in domain):
        raise ValueError("ghat on (0, R) needs x, y inside the interval")
    if a == 2.0:
        return min(float(V(x)) * float(V(R - y)),
                   float(V(R - x)) * float(V(y))) / R
    dx = domain.boundary_distance(x)
    dy = domain.boundary_distance(y)
    vv = float(V(dx)) * float(V(dy))
    if a == 1.0:
        return math.inf if d == 0.0 else math.log1p(vv / d)
    if a > 1.0:
        first = vv / math.sqrt(dx * dy)
        return first if d == 0.0 else min(first, vv / d)
    return math.inf if d == 0.0 else min(d ** (a - 1.0), vv / d)


def ghat_stable(domain: HalfLine | Interval, x: float, y: float,
                alpha: float) -> float:
    """ghat evaluated on the stable renewal function x^{alpha/2}."""
    return ghat(domain, x, y, lambda u: u ** (alpha / 2.0), alpha)


# -- Poisson kernel ------------------------------------------------------

resolved_poisson_constants: dict[float, float] = {}
_C_LOCK = threading.Lock()


def _resolve_poisson_constant(alpha: float) -> float:
    """Normalization of the stable half-line Poisson kernel.

    The unnormalized kernel (x/|z|)^{alpha/2} (x - z)^{-1} at x = 1 has
    mass int_0^oo u^{-alpha/2} / (1 + u) du over z = -u, by scaling the
    same for every x.  The symmetric stable process leaves the half-line
    by a downward jump with probability one, so the constant is the
    reciprocal of that mass.
    """
    a = float(alpha)

    def f(t):
        t = np.asarray(t, dtype=float)
        return np.exp(t * (1.0 - a / 2.0)) / (1.0 + np.exp(t))

    lo = -80.0 / (2.0 - a) - 5.0
    hi = 160.0 / a + 5.0
    mass, _ = adaptive_gauss(f, lo, hi, epsabs=1e-14, epsrel=1e-12)
    return 1.0 / mass


def poisson_stable_halfline(x: float, z: float, alpha: float) -> float:
    """Poisson kernel of the half-line for the stable process, alpha < 2.

    C_alpha (V_alpha(x) / V_alpha(|z|)) / (x - z) for z < 0 < x, with
    C_alpha resolved numerically (see _resolve_poisson_constant).
    """
    x, z = float(x), float(z)
    a = float(alpha)
    if not 0.0 < a < 2.0:
        raise ValueError("the stable Poisson kernel needs alpha < 2; "
                         "Brownian motion leaves by hitting the boundary")
    if not (z < 0.0 < x):
        raise ValueError("poisson_stable_halfline needs z < 0 < x")
    with _C_LOCK:
        c = resolved_poisson_constants.get(a)
    if c is None:
        c = _resolve_poisson_constant(a)
        with _C_LOCK:
            resolved_poisson_constants.setdefault(a, c)
    return c * (x / abs(z)) ** (a / 2.0) / (x - z)
