"""Domains the potential-theory kernels are defined on.

Only two shapes appear in this package: the positive half-line (0, oo) and
the bounded interval (0, R).  Both expose membership and the distance to
the boundary; every kernel takes one of these as its domain argument.
Translation-invariant callers shift their data to this canonical position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class HalfLine:
    """The open half-line (0, oo)."""

    def __contains__(self, x: float) -> bool:
        return x > 0.0

    def boundary_distance(self, x: float) -> float:
        return x

    @property
    def length(self) -> float:
        return math.inf

    def __repr__(self) -> str:
        return "HalfLine()"


@dataclass(frozen=True)
class Interval:
    """The open interval (0, R)."""

    R: float

    def __post_init__(self):
        if not (self.R > 0.0 and math.isfinite(self.R)):
            raise ValueError("interval length must be positive and finite")

    def __contains__(self, x: float) -> bool:
        return 0.0 < x < self.R

    def boundary_distance(self, x: float) -> float:
        return min(x, self.R - x)

    @property
    def length(self) -> float:
        return self.R


HALFLINE = HalfLine()
