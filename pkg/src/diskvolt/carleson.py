"""Induced measures and their Carleson-square behaviour.

A profile records, for each dyadic level ``l`` (arc length ``h = 2**-l``),
the largest gauged square mass over a family of arcs.  Shallow levels use
every dyadic arc, its half-shifted copy and the arcs centred at the
measure's focus angles; deeper levels only refine around the best arcs of
the previous level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .analytic import AnalyticFn, differentiate, evaluate, singular_angles
from .parallel import pmap
from .quadrature import ArcInterval, QuadratureConfig, integrate_disk, integrate_square
from .spaces import NormResult
from .verdict import (DEFAULT_SLOPE_TOL, Truth, Verdict, bounded_from_slope,
                      vanishing_from_slope)

TWO_PI = 2.0 * math.pi

PROFILE_QUADRATURE = QuadratureConfig(radial_levels=20, nodes_per_annulus=10, panel_nodes=6,
                                      abs_tol=1e-14, rel_tol=1e-4)


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    density: Callable[[np.ndarray, np.ndarray], np.ndarray]
    focus: tuple[float, ...] = ()
    params: dict = field(default_factory=dict)
    is_zero: bool = False

    @classmethod
    def volterra(cls, g: AnalyticFn, q: float, beta: float) -> "MeasureSpec":
        """``(1-|z|^2)^beta |g'(z)|^q dA``."""
        if not q > 0:
            raise ValueError("q must be positive")
        if not beta > -1:
            raise ValueError("beta must exceed -1")
        dg = differentiate(g)

        def density(z, w):
            return np.abs(evaluate(dg, z)) ** q * w ** beta

        return cls("volterra", density, singular_angles(dg),
                   {"g": g.to_symbol(), "q": q, "beta": beta}, dg.is_zero)

    @classmethod
    def plain(cls, sigma: float) -> "MeasureSpec":
        """``(1-|z|^2)^sigma dA``."""
        if not sigma > -1:
            raise ValueError("sigma must exceed -1")
        return cls("plain", lambda z, w: w ** sigma, (), {"sigma": sigma})

    @classmethod
    def explicit(cls, density, focus: Sequence[float] = ()) -> "MeasureSpec":
        return cls("explicit", density, tuple(focus), {})

    @classmethod
    def zero(cls) -> "MeasureSpec":
        return cls("explicit", lambda z, w: np.zeros(np.shape(w)), (), {}, True)


class GaugeKind(enum.Enum):
    POWER = "power"
    LOG = "log"


@dataclass(frozen=True)
class Gauge:
    """``Power(s)``: ``mu(S(I)) / |I|^s``.  ``Log(e)``: ``mu(S(I)) * log(1/|I|)^(-e)``."""

    kind: GaugeKind
    exponent: float

    def __post_init__(self):
        if self.kind is GaugeKind.POWER and not self.exponent > 0:
            raise ValueError("power gauge needs s > 0")

    @classmethod
    def power(cls, s: float) -> "Gauge":
        return cls(GaugeKind.POWER, float(s))

    @classmethod
    def log(cls, e: float) -> "Gauge":
        return cls(GaugeKind.LOG, float(e))

    def __call__(self, mass: float, h: float) -> float:
        if self.kind is GaugeKind.POWER:
            return mass / h ** self.exponent
        return mass * math.log(1.0 / h) ** (-self.exponent)

    def abscissa(self, level: int) -> float:
        x = level * math.log(2.0)
        return x if self.kind is GaugeKind.POWER else math.log(x)

    def to_dict(self):
        return {"kind": self.kind.value, "exponent": self.exponent}


@dataclass
class LevelSup:
    level: int
    sup: float
    argmax_angle: float
    tolerance_ok: bool = True


@dataclass
class CarlesonProfile:
    gauge: Gauge
    levels: list[LevelSup]
    slope: float

    @property
    def sups(self) -> np.ndarray:
        return np.array([lv.sup for lv in self.levels])

    @property
    def overall_sup(self) -> float:
        return float(self.sups.max())

    @property
    def decay_exponent(self) -> float:
        """Exponent ``k`` in ``sup ~ |I|^k`` (power gauge), i.e. ``-slope``."""
        return -self.slope

    def to_dict(self, verdict: Verdict | None = None) -> dict:
        out = {
            "gauge": self.gauge.to_dict(),
            "levels": [{"l": lv.level, "sup": _f(lv.sup), "argmax_angle": lv.argmax_angle,
                        "tolerance_ok": lv.tolerance_ok} for lv in self.levels],
            "slope": _f(self.slope),
        }
        if verdict is not None:
            out["verdict"] = verdict.holds.value
        return out


def _f(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def square_measure(mu: MeasureSpec, I: ArcInterval, cfg: QuadratureConfig | None = None):
    """``mu(S(I))`` with an error estimate; ``inf`` when the square mass diverges."""
    if mu.is_zero:
        return 0.0, 0.0
    res = integrate_square(mu.density, I, cfg, focus=mu.focus)
    if res.diverged:
        return math.inf, math.inf
    return float(np.real(res.value)), res.error


def total_mass(mu: MeasureSpec, cfg: QuadratureConfig | None = None) -> NormResult:
    if mu.is_zero:
        return NormResult(0.0, 0.0, False, np.zeros(4))
    res = integrate_disk(mu.density, cfg, focus=mu.focus)
    if res.diverged:
        return NormResult(float(np.real(res.value)), math.inf, True, res.levels)
    return NormResult(float(np.real(res.value)), res.error, False, res.levels)


def _canon(theta: float) -> float:
    t = round(theta % TWO_PI, 12)
    return 0.0 if TWO_PI - t < 1e-9 else t


def _candidates(level: int, full_levels: int, previous: list[tuple[float, float]],
                foci: Sequence[float], zoom: int) -> list[float]:
    h = 2.0 ** -level
    centers: set[float] = set()
    if level <= full_levels:
        n = 2 ** level
        for k in range(n):
            centers.add(_canon(TWO_PI * (k + 0.5) * h))
            centers.add(_canon(TWO_PI * k * h))
    else:
        best = sorted(previous, key=lambda t: (-t[0], t[1]))[:zoom]
        for _, c in best:
            for off in (-1.0, -0.5, 0.0, 0.5, 1.0):
                centers.add(_canon(c + off * TWO_PI * h))
    for f in foci:
        centers.add(_canon(f))
    return sorted(centers)


def carleson_profile(mu: MeasureSpec, gauge: Gauge, L: int = 12,
                     cfg: QuadratureConfig | None = None, full_levels: int = 5,
                     zoom: int = 4, threads: int | None = None) -> CarlesonProfile:
    if L < 4:
        raise ValueError("profile depth L must be at least 4")
    cfg = cfg or PROFILE_QUADRATURE
    levels: list[LevelSup] = []
    previous: list[tuple[float, float]] = []
    for level in range(1, L + 1):
        h = 2.0 ** -level
        centers = _candidates(level, full_levels, previous, mu.focus, zoom)

        def one(c, h=h):
            if mu.is_zero:
                return 0.0, 0.0
            res = integrate_square(mu.density, ArcInterval(c, h), cfg, focus=mu.focus)
            if res.diverged:
                return math.inf, math.inf
            return float(np.real(res.value)), res.error

        masses = pmap(one, centers, threads)
        gauged = [(gauge(m, h), c) for (m, _), c in zip(masses, centers)]
        # an error only matters if it could move the level sup
        top = max(m for m, _ in masses)
        ok = all(e <= max(cfg.abs_tol, cfg.rel_tol * top) for _, e in masses)
        sup, arg = max(gauged, key=lambda t: (t[0], -t[1]))
        levels.append(LevelSup(level, sup, arg, ok))
        previous = gauged
    return CarlesonProfile(gauge, levels, _profile_slope(gauge, levels))


def _profile_slope(gauge: Gauge, levels: list[LevelSup]) -> float:
    window = levels[len(levels) - max(len(levels) // 2, 2):]
    y = np.array([lv.sup for lv in window])
    if np.any(np.isinf(y)):
        return math.inf
    if not np.any(y > 0):
        return -math.inf
    if np.any(y <= 0):
        return -math.inf
    x = np.array([gauge.abscissa(lv.level) for lv in window])
    return float(np.polyfit(x, np.log(y), 1)[0])


class CarlesonMode(enum.Enum):
    BOUNDED = "bounded-constant"
    VANISHING = "vanishing"

    @classmethod
    def _missing_(cls, value):
        if value in ("bounded", "bounded_constant"):
            return cls.BOUNDED
        return None


def classify_carleson(profile: CarlesonProfile, mode: CarlesonMode | str = CarlesonMode.BOUNDED,
                      slope_tol: float = DEFAULT_SLOPE_TOL) -> Verdict:
    mode = CarlesonMode(mode)
    if len(profile.levels) < 8:
        raise ValueError("classification needs a profile of depth at least 8")
    sups = profile.sups
    name = f"carleson-{mode.value}"
    ev = profile.to_dict()
    if np.any(np.isinf(sups)):
        return Verdict(Truth.FAILS, name, profile.slope, math.inf, ev)
    if not np.any(sups > 0):
        return Verdict(Truth.HOLDS, name, profile.slope, 0.0, ev)
    if mode is CarlesonMode.BOUNDED:
        window = sups[len(sups) - max(len(sups) // 2, 2):]
        if np.all(np.diff(window) <= 1e-12 * window[:-1]):
            holds = Truth.HOLDS
        else:
            holds = bounded_from_slope(profile.slope, slope_tol)
    else:
        holds = vanishing_from_slope(profile.slope, sups[0], sups[-1], slope_tol)
    if holds is not Truth.FAILS and not all(lv.tolerance_ok for lv in profile.levels[-3:]):
        holds = Truth.INCONCLUSIVE
    return Verdict(holds, name, profile.slope, float(sups.max()), ev)
