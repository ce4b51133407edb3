"""Numerical potential theory for the symmetric geometric alpha-stable process.

The package evaluates the renewal function of the ascending ladder-height
process, Green functions and Poisson kernels of the half-line and of bounded
intervals, exit-time functionals, and closed-form two-sided comparators for
all of these, for the one-dimensional Levy process with characteristic
exponent

    Psi(xi) = log(1 + |xi|^alpha),        0 < alpha <= 2.

A Monte Carlo engine simulates the process exactly in distribution on a time
grid (gamma subordination of an alpha-stable law), and a verification harness
measures every comparability constant empirically.
"""

from .spectral import Mode, ProcessSpec, LadderExponent
from .renewal import RenewalFunction, get_renewal
from .quadrature import QuadratureError
from .domains import HalfLine, Interval, HALFLINE
from .levy import LevyDensity, get_levy_density, levy_density, stable_density
from .halfline import HalfLinePotential, KernelValue, Method, get_halfline
from .interval import IntervalPotential, ExitTimeInterval, get_interval
from .montecarlo import SimConfig, ExitBatch, run_exit, sample_increment
from .harness import (
    RatioReport,
    InequalityResult,
    ratio_sweep,
    registered_ids,
    inequality_suite,
    check_harnack,
    check_bhp,
    emit,
)

__version__ = "0.1.0"

__all__ = [
    "Mode",
    "ProcessSpec",
    "LadderExponent",
    "RenewalFunction",
    "get_renewal",
    "QuadratureError",
    "HalfLine",
    "Interval",
    "HALFLINE",
    "LevyDensity",
    "get_levy_density",
    "levy_density",
    "stable_density",
    "HalfLinePotential",
    "KernelValue",
    "Method",
    "get_halfline",
    "IntervalPotential",
    "ExitTimeInterval",
    "get_interval",
    "SimConfig",
    "ExitBatch",
    "run_exit",
    "sample_increment",
    "RatioReport",
    "InequalityResult",
    "ratio_sweep",
    "registered_ids",
    "inequality_suite",
    "check_harnack",
    "check_bhp",
    "emit",
    "__version__",
]
