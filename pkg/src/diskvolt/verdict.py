"""Tri-state outcomes and the shared slope/decay classifiers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

DEFAULT_SLOPE_TOL = 0.1
GROWTH_SLOPE_TOL = 0.04


class Truth(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"

    def __and__(self, other: "Truth") -> "Truth":
        if Truth.FAILS in (self, other):
            return Truth.FAILS
        if Truth.INCONCLUSIVE in (self, other):
            return Truth.INCONCLUSIVE
        return Truth.HOLDS

    @property
    def decided(self) -> bool:
        return self is not Truth.INCONCLUSIVE

    def __bool__(self):
        raise TypeError("Truth is tri-state; compare against Truth.HOLDS explicitly")


def all_of(*items: Truth) -> Truth:
    out = Truth.HOLDS
    for t in items:
        out = out & t
    return out


def bounded_from_slope(slope: float, tol: float) -> Truth:
    """Growth slope of a quantity as the boundary is approached.

    Non-positive slopes mean a bounded quantity.  Slopes in ``(tol/2, tol)``
    are too close to call.
    """
    if math.isnan(slope):
        return Truth.INCONCLUSIVE
    if slope <= 0.5 * tol:
        return Truth.HOLDS
    if slope >= tol:
        return Truth.FAILS
    return Truth.INCONCLUSIVE


def vanishing_from_slope(slope: float, first: float, last: float, tol: float) -> Truth:
    if math.isnan(slope):
        return Truth.INCONCLUSIVE
    if last == 0:
        return Truth.HOLDS
    if slope <= -tol:
        return Truth.HOLDS if last < first / 4 else Truth.INCONCLUSIVE
    if slope >= -0.5 * tol:
        return Truth.FAILS
    return Truth.INCONCLUSIVE


def finite_from_decay(decay: float, diverged: bool, tol: float) -> Truth:
    """Finiteness of an integral from the per-level decay rate ``kappa``.

    ``kappa`` is minus the slope of ``log2`` of the per-annulus contributions;
    the integral converges iff ``kappa > 0``.
    """
    if math.isnan(decay):
        return Truth.INCONCLUSIVE
    if decay >= tol and not diverged:
        return Truth.HOLDS
    if decay <= -tol:
        return Truth.FAILS
    return Truth.INCONCLUSIVE


@dataclass
class Verdict:
    holds: Truth
    criterion: str
    slope: float | None = None
    constant: float | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds.value,
            "criterion": self.criterion,
            "slope": _num(self.slope),
            "constant": _num(self.constant),
            "evidence": self.evidence,
        }


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x
