"""Spectral building blocks of the symmetric geometric alpha-stable process.

The process is Brownian motion (running at twice the standard speed, so the
alpha = 2 stable density at time u has variance 2u) subordinated by a gamma
subordinator.  Its Laplace/characteristic exponents are

    psi(lam)  = log(1 + lam^(alpha/2))          (subordinator composition)
    Psi(xi)   = psi(xi^2) = log(1 + |xi|^alpha)

with 0 < alpha <= 2.  A "stable" mode replaces psi by lam^(alpha/2), giving
the symmetric alpha-stable process; every downstream formula then has a
closed form, which is how the quadrature pipeline is validated end to end.

Two derived spectral objects drive all potential-theoretic quadratures:

* the ladder-height Laplace exponent

      psi_dagger(xi) = exp( (1/pi) * int_0^oo  xi * log Psi(zeta)
                                               / (xi^2 + zeta^2) dzeta ),

  normalized so that the ladder-time exponent at the origin is sqrt(z);

* the boundary spectral weight Im(-1/psi^+(-xi^2)), the density (away from
  an atom at zero of mass pi*b) of the measure representing the renewal
  function and its derivative.  psi^+ denotes the extension of psi to the
  upper complex half-plane.

Both are evaluated log-safely for xi between roughly exp(-300) and
exp(260), far outside the range where xi^alpha is representable.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicSpline, PchipInterpolator

from .quadrature import adaptive_gauss

_PI = math.pi

# Even moments of the Cauchy-ladder smoothing kernel 1/(2 cosh u), used by
# the large-xi expansion of psi_dagger:  K2 = (1/pi) int u^2/(2 cosh u) du
# and similarly K4.  Closed forms are pi^2/8 and 5 pi^4/32; they are
# computed here by quadrature so nothing is copied from tables.  sech is
# written in exponential form because math.cosh overflows past u ~ 710.
def _sech(u: float) -> float:
    e = math.exp(-abs(u))
    return 2.0 * e / (1.0 + e * e)


K2 = quad(lambda u: u * u * _sech(u), 0.0, 60.0)[0] / _PI
K4 = quad(lambda u: u ** 4 * _sech(u), 0.0, 80.0)[0] / _PI


class Mode(enum.Enum):
    """Which Laplace exponent the spec describes."""

    GEOMETRIC = "geometric"
    STABLE = "stable"


@dataclass(frozen=True)
class ProcessSpec:
    """Immutable description of the process and of quadrature tolerances.

    alpha             stability index in (0, 2]
    mode              GEOMETRIC (default) or STABLE reference process
    quad_tol          relative tolerance target for spectral quadratures
    xi_cutoff_factor  the e^{-x xi} factor in the renewal-derivative
                      integrand is truncated at xi = xi_cutoff_factor / x
    exact_oracle      in STABLE mode, use the closed form psi_dagger and
                      renewal function instead of quadrature
    """

    alpha: float
    mode: Mode = Mode.GEOMETRIC
    quad_tol: float = 1e-10
    xi_cutoff_factor: float = 50.0
    exact_oracle: bool = False

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError("alpha must lie in (0, 2], got %r" % (self.alpha,))
        if self.mode is Mode.GEOMETRIC and self.alpha > 1.95:
            # The spectral mass of the geometric process spreads over
            # ~1/(1-alpha/2) decades near xi = 0; past 1.95 parts of it fall
            # below the double-precision floor and accuracy degrades.
            if self.alpha != 2.0:
                raise ValueError(
                    "geometric mode supports alpha in (0, 1.95] or exactly 2")

    @property
    def is_brownian_limit(self) -> bool:
        return self.alpha == 2.0


def laplace_exponent(spec: ProcessSpec, lam):
    """psi(lam) for lam >= 0."""
    lam = np.asarray(lam, dtype=float)
    p = lam ** (spec.alpha / 2.0)
    if spec.mode is Mode.STABLE:
        return p
    return np.log1p(p)


def levy_exponent(spec: ProcessSpec, xi):
    """Psi(xi) = psi(xi^2), stable against overflow of |xi|^alpha."""
    xi = np.asarray(xi, dtype=float)
    with np.errstate(divide="ignore"):
        logxi = np.log(np.abs(xi))
    return np.exp(log_levy_exponent(spec, logxi))


def log_levy_exponent(spec: ProcessSpec, logxi):
    """log Psi(e^t) as a function of t = log |xi|.

    Valid for any t; all branches avoid overflow.  For the stable mode this
    is exactly alpha * t.  Note the value is the logarithm of Psi, which is
    negative where Psi < 1.
    """
    t = np.asarray(logxi, dtype=float)
    a = spec.alpha
    if spec.mode is Mode.STABLE:
        return a * t
    y = a * t
    out = np.empty_like(y)
    hi = y > 35.0
    lo = y < -35.0
    mid = ~(hi | lo)
    # log(log(1 + e^y)):
    out[hi] = np.log(y[hi] + np.exp(-y[hi]))
    # log(1+e^y) ~ e^y (1 - e^y/2):  log of it ~ y + log1p(-e^y/2)
    out[lo] = y[lo] + np.log1p(-0.5 * np.exp(y[lo]))
    out[mid] = np.log(np.log1p(np.exp(y[mid])))
    return out


def drift_coefficient(spec: ProcessSpec) -> float:
    """Drift b of the ladder-height process: lim xi/sqrt(Psi(xi)) as xi->oo.

    Equals 1 exactly when alpha = 2 (the subordinated Brownian case has a
    linear ladder drift) and 0 for alpha < 2.
    """
    return 1.0 if spec.alpha == 2.0 else 0.0


def spectral_weight(spec: ProcessSpec, xi):
    """Im(-1/psi^+(-xi^2)) for xi > 0, the absolutely continuous boundary
    spectral density.  The atom pi*b at xi = 0 is NOT included; it is carried
    separately by drift_coefficient.

    Geometric mode, alpha = 2:   0 on (0, 1],
                                 pi / (pi^2 + log^2(xi^2 - 1)) on (1, oo).
    Geometric mode, alpha < 2:   with z = 1 + xi^alpha e^{i alpha pi/2},
                                 Arg z / (Arg^2 z + log^2 |z|).
    Stable mode:                 sin(alpha pi/2) xi^{-alpha} (0 for alpha=2).
    """
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi).astype(float)
    if np.any(xi < 0.0):
        raise ValueError("spectral_weight requires xi >= 0")
    a = spec.alpha
    out = np.zeros_like(xi)
    pos = xi > 0.0
    with np.errstate(divide="ignore"):
        logxi = np.where(pos, np.log(xi, where=pos, out=np.zeros_like(xi)),
                         -np.inf)
    if spec.mode is Mode.STABLE:
        if a < 2.0:
            out[pos] = math.sin(a * _PI / 2.0) * np.exp(-a * logxi[pos])
            out[~pos] = np.inf
    elif a == 2.0:
        sup = xi > 1.0
        # log(xi^2 - 1) computed as log(xi-1) + log(xi+1) for accuracy
        # near the edge, switching to 2 log xi + log1p(-xi^-2) high up.
        lx = np.zeros_like(xi)
        med = sup & (logxi < 150.0)
        big = sup & ~med
        lx[med] = np.log(xi[med] - 1.0) + np.log1p(xi[med])
        lx[big] = 2.0 * logxi[big] + np.log1p(-np.exp(-2.0 * logxi[big]))
        out[sup] = _PI / (_PI * _PI + lx[sup] ** 2)
    else:
        A = a * _PI / 2.0
        cosA, sinA = math.cos(A), math.sin(A)
        ls = a * logxi
        arg = np.empty_like(xi)
        logz = np.empty_like(xi)
        big = pos & (ls > 30.0)
        sml = pos & (ls < -30.0)
        mid = pos & ~big & ~sml
        s_mid = np.exp(ls[mid])
        arg[mid] = np.arctan2(s_mid * sinA, 1.0 + s_mid * cosA)
        logz[mid] = 0.5 * np.log1p(2.0 * s_mid * cosA + s_mid * s_mid)
        inv = np.exp(-ls[big])
        arg[big] = np.arctan2(sinA, cosA + inv)
        logz[big] = ls[big] + 0.5 * np.log1p(
            2.0 * cosA * inv + inv * inv)
        # z - 1 -> 0: Arg ~ s sinA, log|z| ~ s cosA, magnitude s.
        s_sml = np.exp(ls[sml])
        arg[sml] = s_sml * sinA
        logz[sml] = s_sml * cosA
        # weight = Arg / (Arg^2 + log^2|z|); for tiny s this is
        # sinA / (s * (sin^2+cos^2)) = sinA * s^-1... expressed stably:
        out[sml] = sinA / s_sml / (sinA ** 2 + cosA ** 2)
        den = arg[mid] ** 2 + logz[mid] ** 2
        out[mid] = arg[mid] / den
        out[big] = arg[big] / (arg[big] ** 2 + logz[big] ** 2)
        out[~pos] = np.inf
    return float(out[0]) if scalar else out


def _ladder_integrand_factory(spec: ProcessSpec, logxi: float):
    """Scalar integrand theta -> log Psi(xi tan theta) for scipy.quad."""

    def g(theta: float) -> float:
        lt = math.log(math.tan(theta)) if theta < 1.5707963267948966 else 745.0
        return float(log_levy_exponent(spec, np.asarray(logxi + lt)))

    return g


class LadderExponent:
    """Cached evaluator of the ladder-height Laplace exponent psi_dagger.

    Construction fills a monotone log-log interpolation table on a log-spaced
    xi grid wide enough for every renewal-function quadrature (down to the
    decay floor of the small-xi spectral mass, up to e^260).  Outside the
    table the direct quadrature is used.  Instances are immutable after
    construction and safe to share between threads.
    """

    def __init__(self, spec: ProcessSpec, *, center_nodes: int = 1024,
                 wing_nodes: int = 160, table_hi_log: float = 262.0):
        self.spec = spec
        a = spec.alpha
        if spec.mode is Mode.GEOMETRIC and a < 2.0:
            lo = -min(320.0, max(60.0, 50.0 / (1.0 - a / 2.0)))
        else:
            lo = -40.0
        self.table_lo_log = lo
        self.table_hi_log = table_hi_log
        if spec.mode is Mode.STABLE and spec.exact_oracle:
            self._interp = None
            self._interp_rel_err = 0.0
            return
        # log psi_dagger curves in a band around t = 0 and flattens towards
        # both asymptotes with curvature decaying like 1/t^2, so the node
        # budget is concentrated in a uniform central band with log-graded
        # wings (spacing growing proportionally to |t|) on either side.
        c_lo, c_hi = max(lo, -32.0), 32.0
        parts = [np.linspace(c_lo, c_hi, center_nodes, endpoint=False)]
        if lo < c_lo:
            parts.insert(0, -np.exp(np.linspace(
                math.log(-lo), math.log(-c_lo), wing_nodes, endpoint=False)))
        parts.append(np.exp(np.linspace(
            math.log(c_hi), math.log(table_hi_log), wing_nodes)))
        ts = np.concatenate(parts)
        vals = np.array([self._direct_log(t) for t in ts])
        self._interp = CubicSpline(ts, vals, extrapolate=False)
        # Validate the table midway between nodes and record the worst
        # deviation in log (~ relative error of psi_dagger); it feeds
        # downstream error estimates.
        probes = 0.5 * (ts[:-1:11] + ts[1::11])
        worst = 0.0
        for t in probes:
            direct = self._direct_log(t)
            apx = float(self._interp(t))
            worst = max(worst, abs(apx - direct))
        self._interp_rel_err = worst

    def _direct_log(self, logxi: float) -> float:
        """log psi_dagger(e^logxi) by direct theta-quadrature."""
        g = _ladder_integrand_factory(self.spec, logxi)
        tol = self.spec.quad_tol
        # The integrand bends sharply where xi * tan(theta) crosses 1;
        # handing quadpack that knee as a breakpoint roughly halves the
        # achievable error.
        knee = math.atan(math.exp(min(40.0, max(-40.0, -logxi))))
        pts = [knee] if 1e-12 < knee < _PI / 2.0 - 1e-12 else None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(g, 0.0, _PI / 2.0, epsabs=tol, epsrel=tol,
                            limit=400, points=pts)
            if err > 100.0 * max(tol, tol * abs(val)) and err > 1e-7:
                val2, err2 = quad(g, 0.0, _PI / 2.0, epsabs=10 * tol,
                                  epsrel=10 * tol, limit=800, points=pts)
                if err2 < err:
                    val, err = val2, err2
        return val / _PI

    def direct(self, xi: float) -> tuple[float, float]:
        """Uncached psi_dagger(xi) with a crude error estimate."""
        lv = self._direct_log(math.log(xi))
        v = math.exp(lv)
        return v, abs(v) * 10.0 * self.spec.quad_tol

    def log_value(self, logxi):
        """log psi_dagger at t = log xi (vectorized)."""
        spec = self.spec
        t = np.asarray(logxi, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t).astype(float)
        if spec.mode is Mode.STABLE and spec.exact_oracle:
            out = 0.5 * spec.alpha * t
            return float(out[0]) if scalar else out
        out = np.empty_like(t)
        inside = (t >= self.table_lo_log) & (t <= self.table_hi_log)
        if np.any(inside):
            out[inside] = self._interp(t[inside])
        idx = np.nonzero(~inside)[0]
        for i in idx:
            out[i] = self._direct_log(float(t[i]))
        return float(out[0]) if scalar else out

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi).astype(float)
        if np.any(xi <= 0.0):
            raise ValueError("psi_dagger requires xi > 0")
        out = np.exp(self.log_value(np.log(xi)))
        return float(out[0]) if scalar else out

    @property
    def table_rel_err(self) -> float:
        return self._interp_rel_err

    def asymptotic_log(self, t):
        """Large-xi expansion of log psi_dagger (geometric mode).

        log psi_dagger(e^t) = (1/2) log(alpha t) - K2/(2 t^2) - K4/(4 t^4)
                              + O(t^-6),
        valid once the kernel window [t - O(t), t + O(t)] sits inside the
        region where log Psi(e^s) = log(alpha s).  Used only for t >= ~200.
        """
        a = self.spec.alpha
        t = np.asarray(t, dtype=float)
        return 0.5 * np.log(a * t) - K2 / (2.0 * t * t) - K4 / (4.0 * t ** 4)


def ladder_spectral_density(spec: ProcessSpec, ladder: LadderExponent, xi):
    """mu(xi) = psi_dagger(xi) * Im(-1/psi^+(-xi^2)).

    The density (against dxi) of the measure whose truncated / exponential
    moments produce the renewal function and its derivative.  Decays like
    log^{-3/2} xi in geometric mode, xi^{-alpha/2} in stable mode.
    """
    xi = np.asarray(xi, dtype=float)
    return ladder(xi) * spectral_weight(spec, xi)
