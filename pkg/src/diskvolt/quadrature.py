"""Area integrals over the unit disk, Carleson squares and pseudo-hyperbolic disks.

All integrals are against the normalized area measure ``dA = dx dy / pi``.
Integrands are callables ``F(z, w)`` receiving sample points ``z`` and the
boundary defect ``w = 1 - |z|**2``; ``w`` is computed from the distance to
the circle so it keeps full relative precision near ``|z| = 1``.

The radial direction is split into dyadic annuli ``s = 1 - r`` in
``[s_top 2**-(l+1), s_top 2**-l]`` with Gauss-Legendre nodes in each.  For
the whole disk the innermost annulus ``r < 1/2`` is further split into
dyadic rings toward the origin, integrated in ``u = r**2``.  Contributions
beyond the last annulus are closed with a geometric tail fitted to the last
two annuli; non-decaying contributions raise the divergence flag.

Angular nodes are composite Gauss-Legendre panels.  Around each focus angle
(the argument of a nearby singularity) panel breakpoints are graded
geometrically starting from the annulus depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DivergenceDetected, ToleranceNotMet

TWO_PI = 2.0 * math.pi

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureConfig:
    radial_levels: int = 24
    nodes_per_annulus: int = 16
    angular_nodes: int = 64
    panel_nodes: int = 8
    inner_levels: int = 12
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.radial_levels < 4:
            raise ValueError("radial_levels must be at least 4")
        if self.angular_nodes <= 0 or self.angular_nodes % 4:
            raise ValueError("angular_nodes must be a positive multiple of 4")
        if self.nodes_per_annulus < 2 or self.panel_nodes < 2:
            raise ValueError("need at least 2 nodes per annulus and per panel")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ArcInterval:
    """Boundary arc with center angle in radians and normalized length in (0, 1]."""

    center: float
    length: float

    def __post_init__(self):
        if not 0 < self.length <= 1:
            raise ValueError("normalized arc length must lie in (0, 1]")

    @property
    def bounds(self) -> tuple[float, float]:
        half = math.pi * self.length
        return self.center - half, self.center + half


@dataclass(frozen=True)
class CarlesonSquareRegion:
    interval: ArcInterval

    @property
    def radial_range(self) -> tuple[float, float]:
        return 1.0 - self.interval.length, 1.0


@dataclass(frozen=True)
class PseudoDisk:
    """Pseudo-hyperbolic disk ``{z : |(z - a) / (1 - conj(a) z)| < r}``."""

    center: complex
    radius: float

    def __post_init__(self):
        if abs(self.center) >= 1:
            raise ValueError("center must lie in the open unit disk")
        if not 0 < self.radius < 1:
            raise ValueError("radius must lie in (0, 1)")

    @property
    def euclidean_center(self) -> complex:
        a, r = complex(self.center), self.radius
        return a * (1 - r * r) / (1 - r * r * abs(a) ** 2)

    @property
    def euclidean_radius(self) -> float:
        a, r = complex(self.center), self.radius
        return r * (1 - abs(a) ** 2) / (1 - r * r * abs(a) ** 2)


@dataclass
class QuadResult:
    value: complex
    error: float
    diverged: bool = False
    levels: np.ndarray = field(default_factory=lambda: np.zeros(0))
    tail: complex = 0.0

    def __iter__(self):
        yield self.value
        yield self.error

    @property
    def decay_slope(self) -> float:
        """Least-squares slope of ``log2 |c_l|`` over the last half of the levels."""
        return level_slope(self.levels)

    def tolerance_met(self, cfg: QuadratureConfig) -> bool:
        return self.error <= max(cfg.abs_tol, cfg.rel_tol * abs(self.value))

    def check(self, cfg: QuadratureConfig) -> "QuadResult":
        if self.diverged:
            raise DivergenceDetected("per-annulus contributions do not decay")
        if not self.tolerance_met(cfg):
            raise ToleranceNotMet(f"error estimate {self.error:.3g} above tolerance")
        return self


def level_slope(levels: np.ndarray) -> float:
    levels = np.asarray(levels, dtype=float)
    n = levels.size
    tail = levels[n - max(n // 2, 3):]
    if not np.any(tail > 0):
        return -math.inf
    if np.any(tail <= 0):
        return -math.inf if tail[-1] <= 0 else math.inf
    k = np.arange(tail.size, dtype=float)
    return float(np.polyfit(k, np.log2(tail), 1)[0])


@lru_cache(maxsize=64)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panels(lo: float, hi: float, depth: float, foci: Sequence[float],
            max_width: float) -> np.ndarray:
    """Panel breakpoints on ``[lo, hi]`` graded toward each focus (taken mod 2pi)."""
    pts = [lo, hi]
    span = hi - lo
    for f in foci:
        base = lo + (f - lo) % TWO_PI
        for g in (base - TWO_PI, base, base + TWO_PI):
            if g < lo - span or g > hi + span:
                continue
            g = min(max(g, lo), hi)
            pts.append(g)
            h = depth
            while h < span:
                pts.append(g - h)
                pts.append(g + h)
                h *= 2.0
    pts = np.unique(np.clip(np.asarray(pts), lo, hi))
    out = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 1e-15 * max(1.0, abs(b)):
            continue
        k = max(1, math.ceil((b - a) / max_width - 1e-9))
        out.extend(a + (b - a) * np.arange(1, k + 1) / k)
    return np.asarray(out)


def _angular_rule(lo, hi, depth, foci, cfg: QuadratureConfig, n: int):
    max_width = TWO_PI * cfg.panel_nodes / cfg.angular_nodes
    br = _panels(lo, hi, depth, foci, max_width)
    x, w = _gauss(n)
    a, b = br[:-1, None], br[1:, None]
    half = 0.5 * (b - a)
    theta = (a + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return theta, weights


def _radial_rule(s_lo, s_hi, n):
    x, w = _gauss(n)
    half = 0.5 * (s_hi - s_lo)
    s = s_lo + half * (x + 1.0)
    return s, half * w


def _annulus(F, s_lo, s_hi, th_lo, th_hi, foci, cfg, nr, nt):
    s, ws = _radial_rule(s_lo, s_hi, nr)
    theta, wt = _angular_rule(th_lo, th_hi, s_lo, foci, cfg, nt)
    r = 1.0 - s
    z = r[:, None] * np.exp(1j * theta)[None, :]
    w = np.broadcast_to((s * (2.0 - s))[:, None], z.shape)
    vals = F(z, w)
    return np.einsum("i,ij,j->", ws * r / math.pi, vals, wt)


def _inner_ring(F, u_lo, u_hi, th_lo, th_hi, cfg, nr, nt):
    x, wu = _gauss(nr)
    half = 0.5 * (u_hi - u_lo)
    u = u_lo + half * (x + 1.0)
    theta, wt = _angular_rule(th_lo, th_hi, 1.0, (), cfg, nt)
    z = np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
    w = np.broadcast_to((1.0 - u)[:, None], z.shape)
    vals = F(z, w)
    return np.einsum("i,ij,j->", half * wu / TWO_PI, vals, wt)


def _geometric_tail(c_prev, c_last):
    if c_prev == 0 or c_last == 0:
        return 0.0, False
    rho = c_last / c_prev
    if abs(rho) >= 1:
        return 0.0, True
    return c_last * rho / (1 - rho), False


def _contributions(F, th_lo, th_hi, s_top, cfg, foci, whole, coarse):
    nr = cfg.nodes_per_annulus
    nt = cfg.panel_nodes
    if coarse:
        nr, nt = max(nr // 2, 2), max(nt // 2, 2)
    out = []
    for level in range(cfg.radial_levels):
        s_hi = s_top * 2.0 ** -level
        s_lo = 0.5 * s_hi
        if whole and level == 0:
            c = 0.0
            for j in range(1, cfg.inner_levels + 1):
                r_hi, r_lo = 2.0 ** -j, 2.0 ** -(j + 1)
                c += _inner_ring(F, r_lo * r_lo, r_hi * r_hi, th_lo, th_hi, cfg, nr, nt)
            r_core = 2.0 ** -(cfg.inner_levels + 1)
            c += _inner_ring(F, 0.0, r_core * r_core, th_lo, th_hi, cfg, nr, nt)
        else:
            c = _annulus(F, s_lo, s_hi, th_lo, th_hi, foci, cfg, nr, nt)
        out.append(complex(c))
    return np.asarray(out)


def _sector_integral(F, th_lo, th_hi, s_top, cfg, foci) -> QuadResult:
    whole = s_top >= 1.0
    fine = _contributions(F, th_lo, th_hi, s_top, cfg, foci, whole, False)
    coarse = _contributions(F, th_lo, th_hi, s_top, cfg, foci, whole, True)
    mags = np.abs(fine)
    if not np.all(np.isfinite(fine)):
        return QuadResult(complex(np.nansum(fine)), math.inf, True, mags)
    diverged = bool(mags[-1] > 0 and mags[-1] >= mags[-2] >= mags[-3])
    tail, bad = _geometric_tail(fine[-2], fine[-1])
    tail_prev, _ = _geometric_tail(fine[-3], fine[-2])
    diverged = diverged or bad
    partial = complex(fine.sum())
    value = partial + tail
    if diverged:
        return QuadResult(partial, math.inf, True, mags, 0.0)
    rule_err = abs(partial - complex(coarse.sum()))
    level_err = abs(value - (complex(fine[:-1].sum()) + tail_prev))
    return QuadResult(value, float(rule_err + level_err), False, mags, tail)


def _foci(focus) -> tuple[float, ...]:
    return tuple(float(f) for f in focus)


def integrate_disk(F: Integrand, cfg: QuadratureConfig | None = None,
                   focus: Sequence[float] = (), strict: bool = False) -> QuadResult:
    """Integrate ``F`` over the unit disk against ``dA``."""
    cfg = cfg or QuadratureConfig()
    res = _sector_integral(F, 0.0, TWO_PI, 1.0, cfg, _foci(focus))
    return res.check(cfg) if strict else res


def integrate_square(F: Integrand, S: CarlesonSquareRegion | ArcInterval,
                     cfg: QuadratureConfig | None = None, focus: Sequence[float] = (),
                     strict: bool = False) -> QuadResult:
    """Integrate ``F`` over the Carleson square ``S(I)``."""
    cfg = cfg or QuadratureConfig()
    interval = S.interval if isinstance(S, CarlesonSquareRegion) else S
    lo, hi = interval.bounds
    if interval.length >= 1.0:
        lo, hi = interval.center - math.pi, interval.center + math.pi
    res = _sector_integral(F, lo, hi, interval.length, cfg, _foci(focus))
    return res.check(cfg) if strict else res


def integrate_pseudo_disk(F: Integrand, D: PseudoDisk, cfg: QuadratureConfig | None = None,
                          strict: bool = False) -> QuadResult:
    """Integrate ``F`` over a pseudo-hyperbolic disk (a Euclidean disk inside the unit disk)."""
    cfg = cfg or QuadratureConfig()
    c, R = D.euclidean_center, D.euclidean_radius

    def total(nr, nt):
        x, wu = _gauss(nr)
        u = 0.5 * (x + 1.0) * R * R
        wu = 0.5 * wu * R * R
        theta, wt = _angular_rule(0.0, TWO_PI, 1.0, (), cfg, nt)
        z = c + np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
        w = 1.0 - np.abs(z) ** 2
        return complex(np.einsum("i,ij,j->", wu / TWO_PI, F(z, w), wt))

    fine = total(cfg.nodes_per_annulus, cfg.panel_nodes)
    coarse = total(max(cfg.nodes_per_annulus // 2, 2), max(cfg.panel_nodes // 2, 2))
    res = QuadResult(fine, abs(fine - coarse))
    return res.check(cfg) if strict else res


def radial_weight(sigma: float) -> Integrand:
    """The weight ``(1 - |z|**2) ** sigma``; ``sigma <= -1`` is rejected."""
    if sigma <= -1:
        raise ValueError("weight exponent must exceed -1")
    return lambda z, w: w ** sigma
