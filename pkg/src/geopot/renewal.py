"""Renewal function of the ascending ladder-height process.

For a symmetric Levy process whose local time at the supremum is normalized
so the ladder-time exponent is sqrt(z), the renewal function V of the
ladder-height process and its derivative have the integral representations

    V(x)  = b x + (1/pi) int_0+^oo  Im(-1/psi^+(-xi^2)) *
                  (psi_dagger(xi)/xi) * (1 - e^{-x xi}) dxi
    V'(x) = b   + (1/pi) int_0+^oo  Im(-1/psi^+(-xi^2)) *
                  psi_dagger(xi) * e^{-x xi} dxi

with b the ladder drift (1 when alpha = 2, else 0).  V is a Bernstein
function, strictly increasing and subadditive with V(0) = 0; V' is
completely monotone.

Numerical notes
---------------
Both integrals are performed in t = log xi.  The V' integrand dies off like
e^{-x xi}, so a hard cutoff at xi = O(1/x) suffices.  The V integrand does
not: in geometric mode its tail is mu(e^t) ~ (pi/2) / sqrt(alpha) * t^{-3/2},
so a naive truncation at the double-precision ceiling t ~ 700 would still
miss mass of order t^{-1/2} ~ 4e-2.  The integral is therefore split at
T = 250; beyond T the integrand equals the large-t expansion of
psi_dagger (relative error < 1e-12 there) times the exact rational form of
the spectral weight, and that tail is integrated to infinity under the
substitution v = t^{-1/2}, which maps it to a bounded analytic integrand on
(0, T^{-1/2}].

Below the fixed lower cutoff of the t-range both factors of the integrand
have exact power leading forms, and that strip is completed analytically via
incomplete gamma functions; the completion is what keeps the tables honest
at their large-x end (out to 1e22, where Poisson-kernel tail integrals need
V and V'), since the neglected strip mass scales like x^{1 - alpha/2}.

The stable mode multiplies the raw integral by Gamma(1 + alpha/2).  The
raw normalization (ladder-time exponent sqrt(z)) gives V(x) =
x^{alpha/2} / Gamma(1 + alpha/2) for the alpha-stable process; the rescale
makes the stable reference exactly x^{alpha/2}, the convention used by every
comparator in this package.  Geometric mode is not rescaled.

Pointwise quadrature costs a few ms, so construction fills log-log
interpolation tables for V, V' and V^{-1} (the inverse is what removes the
integrable V'(u) ~ 1/(u log^{3/2} u) edge singularity from Green-function
integrals via the substitution w = V(u)).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gamma as _gamma_fn, gammainc as _gammainc

from .quadrature import adaptive_gauss, QuadratureError
from .spectral import (
    Mode,
    ProcessSpec,
    LadderExponent,
    drift_coefficient,
    spectral_weight,
)

_PI = math.pi

# Where the exact integrand hands over to the analytic tail (geometric mode).
_TAIL_SPLIT = 250.0


@dataclass(frozen=True)
class ValueWithError:
    value: float
    abs_error: float

    def __iter__(self):
        yield self.value
        yield self.abs_error


def renewal_comparator(alpha: float, x):
    """Closed-form two-sided comparator for V in geometric mode:

        V(x) =~ 1 / log^{1/2}(1 + x^{-alpha})

    with absolute constants.  Increasing, x^{alpha/2} at infinity,
    log^{-1/2}(1/x) at zero.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 1.0 / np.sqrt(np.log1p(x ** (-alpha)))


def renewal_derivative_comparator(alpha: float, x):
    """Closed-form comparator for V':  1 / (x log^{3/2}(1 + x^{-alpha/3}))."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 1.0 / (x * np.log1p(x ** (-alpha / 3.0)) ** 1.5)


class RenewalFunction:
    """Immutable evaluator of V, V' and V^{-1} for one ProcessSpec.

    value(x) / derivative(x) accept scalars or arrays and read interpolation
    tables inside [x_lo, x_hi] (direct quadrature outside).  value_err /
    derivative_err return ValueWithError with a propagated absolute error.
    quad_value / quad_derivative bypass the tables.
    """

    def __init__(self, spec: ProcessSpec, *, x_lo: float = 1e-20,
                 x_hi: float = 1e22, nodes: int = 1280,
                 ladder: LadderExponent | None = None):
        self.spec = spec
        self.alpha = spec.alpha
        self.b = drift_coefficient(spec)
        self.norm = (_gamma_fn(1.0 + spec.alpha / 2.0)
                     if spec.mode is Mode.STABLE else 1.0)
        self.x_lo = x_lo
        self.x_hi = x_hi
        self._closed = spec.mode is Mode.STABLE and spec.exact_oracle
        self.ladder = ladder if ladder is not None else LadderExponent(spec)
        if self._closed:
            self._v_interp = None
            self._cache_rel_err = 0.0
            return
        ts = np.linspace(math.log(x_lo), math.log(x_hi), nodes)
        v_vals = np.empty(nodes)
        vp_vals = np.empty(nodes)
        for i, t in enumerate(ts):
            x = math.exp(t)
            v_vals[i] = self._v_quad(x)[0]
            vp_vals[i] = self._vp_quad(x)[0]
        self._logx_nodes = ts
        self._logv_nodes = np.log(v_vals)
        # log V and log V' are smooth and gently curved in log x, so a C^2
        # spline (4th order) beats a shape-preserving cubic by two to three
        # digits at the same node density; monotonicity is not at risk away
        # from kinks and V has none.
        self._v_interp = CubicSpline(ts, self._logv_nodes, extrapolate=False)
        self._vp_interp = CubicSpline(ts, np.log(vp_vals), extrapolate=False)
        self._vinv_interp = CubicSpline(self._logv_nodes, ts,
                                        extrapolate=False)
        worst = 0.0
        for t in 0.5 * (ts[:-1:9] + ts[1::9]):
            x = math.exp(t)
            worst = max(worst,
                        abs(float(np.exp(self._v_interp(t))) /
                            self._v_quad(x)[0] - 1.0),
                        abs(float(np.exp(self._vp_interp(t))) /
                            self._vp_quad(x)[0] - 1.0))
        self._cache_rel_err = worst

    # ----- direct quadratures ------------------------------------------

    def _mu_log(self, t: np.ndarray) -> np.ndarray:
        """mu(e^t) = psi_dagger * spectral weight, vectorized in t."""
        xi = np.exp(t)
        return np.exp(self.ladder.log_value(t)) * spectral_weight(self.spec, xi)

    def _t_lower(self) -> float:
        a = self.alpha
        if a == 2.0:
            return 0.0  # spectral weight vanishes on (0, 1]
        if self.spec.mode is Mode.STABLE:
            return -min(320.0, 45.0 / (1.0 - a / 2.0) + 45.0 / a)
        return -min(320.0, 50.0 / (1.0 - a / 2.0))

    def _below_cutoff(self, x: float, derivative: bool) -> tuple[float, float]:
        """Completion of the spectral integral over xi < e^{t_lower}.

        Below the cutoff both factors of mu have exact leading forms,
        psi_dagger(xi) = xi^{alpha/2} and weight = sin(alpha pi/2) xi^{-alpha},
        so mu(xi) = s xi^{-alpha/2} (1 + O(xi^{alpha wedge 1})).  The missing
        mass reduces to incomplete-gamma expressions; without it V and V'
        pick up an O(x^{1-alpha/2} e^{t_lower (1-alpha/2)}) error that is
        negligible for moderate x but not for the large-x end of the tables.
        """
        a = self.alpha
        if a == 2.0:
            return 0.0, 0.0  # the spectral weight vanishes below xi = 1
        s = math.sin(0.5 * a * _PI)
        p = 0.5 * a
        xi_lo = math.exp(self._t_lower())
        U = x * xi_lo
        if U <= 0.0:
            return 0.0, 0.0
        if derivative:
            # int_0^{xi_lo} s xi^{-p} e^{-x xi} dxi
            val = (s / _PI) * x ** (p - 1.0) * _gamma_fn(1.0 - p) \
                * _gammainc(1.0 - p, U)
        else:
            # int_0^{xi_lo} s xi^{-p-1} (1 - e^{-x xi}) dxi
            j = (_gamma_fn(1.0 - p) * _gammainc(1.0 - p, U)
                 - U ** -p * -math.expm1(-U)) / p
            val = (s / _PI) * x ** p * j
        # Relative error of the leading forms at xi_lo; 1e-6 over-covers
        # every supported alpha (xi_lo^alpha < 3e-8 at the loosest cutoff).
        return val, abs(val) * 1e-6

    def _tail_integral(self, T: float) -> tuple[float, float]:
        """(1/pi) int_T^oo mu(e^t) dt via the large-t expansion.

        Geometric mode only.  Substituting v = t^{-1/2} gives an analytic
        integrand on (0, T^{-1/2}].
        """
        a = self.alpha
        A = a * _PI / 2.0

        def f(v):
            v = np.asarray(v, dtype=float)
            t = 1.0 / (v * v)
            psid = np.exp(self.ladder.asymptotic_log(t))
            w = A / (A * A + (a * t) ** 2)
            return 2.0 * psid * w / (v ** 3)

        val, err = adaptive_gauss(f, 1e-9, T ** -0.5, epsabs=1e-14,
                                  epsrel=1e-11)
        # v in (0, 1e-9) contributes ~ 2*c*1e-9; fold into the error.
        return val / _PI, err / _PI + 1e-8

    def _v_quad(self, x: float) -> tuple[float, float]:
        """V(x) by direct quadrature (raw normalization, then rescaled)."""
        if x < 0.0:
            raise ValueError("V is defined for x >= 0")
        if x == 0.0:
            return 0.0, 0.0
        if x < 1e-105:
            # Below this the tail handover at T assumes 1 - e^{-x xi} has
            # saturated, which needs x e^T >> 1.
            raise ValueError("x too small for the renewal quadrature")
        spec = self.spec
        a = self.alpha
        t_lo = self._t_lower()

        def integrand(t):
            t = np.asarray(t, dtype=float)
            xi = np.exp(t)
            return self._mu_log(t) * (-np.expm1(-x * xi))

        # In stable mode V(x) = x^{alpha/2} sinks below any fixed absolute
        # tolerance as x -> 0, so the stopping rule must scale with the
        # value.  Geometric V is bounded below by ~0.05 on the table range.
        if spec.mode is Mode.STABLE:
            scale = min(1.0, x ** (a / 2.0))
        else:
            scale = min(1.0, float(renewal_comparator(a, x)))
        eps = 1e-13 * max(scale, 1e-250)
        if spec.mode is Mode.STABLE:
            # The 1 - e^{-x xi} knee sits at t = -log x; past it the
            # integrand dies like e^{-alpha t/2}, and for x > 1 the relative
            # tail criterion still involves log x through V ~ x^{alpha/2}.
            t_hi = abs(math.log(x)) + 80.0 / a + 10.0
            main, merr = adaptive_gauss(integrand, t_lo, t_hi,
                                        epsabs=eps, epsrel=1e-11)
            tail, terr = 0.0, 0.0
        else:
            T = _TAIL_SPLIT
            main, merr = adaptive_gauss(integrand, t_lo, T,
                                        epsabs=eps, epsrel=1e-11)
            tail, terr = self._tail_integral(T)
        below, berr = self._below_cutoff(x, derivative=False)
        v = self.b * x + main / _PI + tail + below
        # The ladder table error is relative on mu, hence on the integral
        # part of V (the drift term is exact).
        err = (merr / _PI + terr + berr + abs(v) * 2e-9
               + abs(main / _PI + tail) * self.ladder.table_rel_err)
        return self.norm * v, self.norm * err

    def _vp_quad(self, x: float) -> tuple[float, float]:
        """V'(x) by direct quadrature."""
        if x <= 0.0:
            raise ValueError("V' is defined for x > 0")
        spec = self.spec
        t_lo = self._t_lower()
        cutoff = spec.xi_cutoff_factor
        t_hi = math.log((cutoff + 20.0) / x)
        if self.alpha == 2.0:
            t_hi = max(t_hi, 2.0)

        def integrand(t):
            t = np.asarray(t, dtype=float)
            xi = np.exp(t)
            return self._mu_log(t) * xi * np.exp(-x * xi)

        if t_hi <= t_lo:
            # e^{-x xi} already negligible at the spectral cutoff; the whole
            # integral lives in the analytic completion below.
            val, err = 0.0, 0.0
        else:
            # V'(x) ~ x^{alpha/2 - 1} decays below any fixed absolute
            # tolerance at the large-x end of the tables, so scale epsabs by
            # the closed-form comparator to keep the stopping rule relative.
            scale = min(1.0, float(renewal_derivative_comparator(
                self.alpha, max(x, 1e-300))))
            val, err = adaptive_gauss(integrand, t_lo, t_hi,
                                      epsabs=1e-13 * max(scale, 1e-250),
                                      epsrel=1e-11)
        # Truncation remainder: mu decays, e^{-x xi} dominates.
        rem = math.exp(-(cutoff + 20.0)) * max(1.0, 1.0 / x)
        below, berr = self._below_cutoff(x, derivative=True)
        v = self.b + val / _PI + below
        err = (err / _PI + rem + berr + abs(v) * 2e-9
               + abs(val / _PI) * self.ladder.table_rel_err)
        return self.norm * v, self.norm * err

    def quad_value(self, x: float) -> ValueWithError:
        if self._closed:
            return ValueWithError(x ** (self.alpha / 2.0), 0.0)
        return ValueWithError(*self._v_quad(float(x)))

    def quad_derivative(self, x: float) -> ValueWithError:
        if self._closed:
            a = self.alpha
            return ValueWithError(0.5 * a * x ** (a / 2.0 - 1.0), 0.0)
        return ValueWithError(*self._vp_quad(float(x)))

    # ----- table-backed evaluation -------------------------------------

    def value(self, x):
        """V(x) for scalar or ndarray x >= 0."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x).astype(float)
        if np.any(x < 0.0):
            raise ValueError("V is defined for x >= 0")
        if self._closed:
            out = x ** (self.alpha / 2.0)
            return float(out[0]) if scalar else out
        out = np.zeros_like(x)
        pos = x > 0.0
        t = np.full_like(x, -np.inf)
        t[pos] = np.log(x[pos])
        inside = pos & (t >= self._logx_nodes[0]) & (t <= self._logx_nodes[-1])
        out[inside] = np.exp(self._v_interp(t[inside]))
        for i in np.nonzero(pos & ~inside)[0]:
            out[i] = self._v_quad(float(x[i]))[0]
        return float(out[0]) if scalar else out

    __call__ = value

    def derivative(self, x):
        """V'(x) for scalar or ndarray x > 0."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x).astype(float)
        if np.any(x <= 0.0):
            raise ValueError("V' is defined for x > 0")
        if self._closed:
            a = self.alpha
            out = 0.5 * a * x ** (a / 2.0 - 1.0)
            return float(out[0]) if scalar else out
        t = np.log(x)
        out = np.empty_like(x)
        inside = (t >= self._logx_nodes[0]) & (t <= self._logx_nodes[-1])
        out[inside] = np.exp(self._vp_interp(t[inside]))
        for i in np.nonzero(~inside)[0]:
            out[i] = self._vp_quad(float(x[i]))[0]
        return float(out[0]) if scalar else out

    def inverse(self, w):
        """V^{-1}(w): the x with V(x) = w.  Values below V(x_lo) map to 0
        (the corresponding x is sub-1e-20 and indistinguishable from zero in
        any downstream integral); values above V(x_hi) are solved directly.
        """
        w = np.asarray(w, dtype=float)
        scalar = w.ndim == 0
        w = np.atleast_1d(w).astype(float)
        if np.any(w < 0.0):
            raise ValueError("V^{-1} is defined for w >= 0")
        if self._closed:
            out = w ** (2.0 / self.alpha)
            return float(out[0]) if scalar else out
        out = np.zeros_like(w)
        lw = np.full_like(w, -np.inf)
        posw = w > 0.0
        lw[posw] = np.log(w[posw])
        inside = posw & (lw >= self._logv_nodes[0]) & (lw <= self._logv_nodes[-1])
        out[inside] = np.exp(self._vinv_interp(lw[inside]))
        for i in np.nonzero(posw & (lw > self._logv_nodes[-1]))[0]:
            wi = float(w[i])
            f = lambda lx: self._v_quad(math.exp(lx))[0] - wi
            hi = self._logx_nodes[-1]
            hh = hi + 1.0
            while f(hh) < 0.0:
                hh += 1.0
                if hh > hi + 400.0:
                    raise QuadratureError("V inverse out of range")
            out[i] = math.exp(brentq(f, hi - 0.5, hh, xtol=1e-12))
        return float(out[0]) if scalar else out

    def value_err(self, x) -> ValueWithError:
        v = self.value(x)
        rel = self._cache_rel_err + self.ladder.table_rel_err + 1e-8
        return ValueWithError(v, abs(v) * rel + 5e-10)

    def derivative_err(self, x) -> ValueWithError:
        v = self.derivative(x)
        rel = self._cache_rel_err + self.ladder.table_rel_err + 1e-8
        return ValueWithError(v, abs(v) * rel + 5e-10)

    @property
    def cache_rel_err(self) -> float:
        return self._cache_rel_err


_REGISTRY: dict[tuple, RenewalFunction] = {}
_REGISTRY_LOCK = threading.Lock()


def get_renewal(alpha: float, mode: Mode = Mode.GEOMETRIC, *,
                exact_oracle: bool = False) -> RenewalFunction:
    """Process-wide memoized RenewalFunction (evaluators are immutable and
    expensive to build, so tests and the harness share them)."""
    key = (float(alpha), mode, exact_oracle)
    with _REGISTRY_LOCK:
        ev = _REGISTRY.get(key)
    if ev is None:
        ev = RenewalFunction(ProcessSpec(alpha, mode,
                                         exact_oracle=exact_oracle))
        with _REGISTRY_LOCK:
            _REGISTRY.setdefault(key, ev)
    return ev
