"""Weighted Bergman and Dirichlet norms, and point-evaluation estimates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import testfunctions
from .analytic import AnalyticFn, constant, differentiate, evaluate, monomial, singular_angles
from .quadrature import QuadratureConfig, QuadResult, integrate_disk, level_slope
from .verdict import DEFAULT_SLOPE_TOL, Truth, finite_from_decay

REGIME_TOL = 1e-12


class Regime(enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class SpaceParams:
    """Exponent ``p`` and weight ``alpha`` of ``A^p_alpha`` / ``D^p_alpha``."""

    p: float
    alpha: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError("p must be positive")
        if not self.alpha > -1:
            raise ValueError("alpha must exceed -1")

    @property
    def regime(self) -> Regime:
        d = self.p - (self.alpha + 2.0)
        if abs(d) <= REGIME_TOL:
            return Regime.CRITICAL
        return Regime.SUBCRITICAL if d < 0 else Regime.SUPERCRITICAL


@dataclass
class NormResult:
    value: float
    error: float
    diverged: bool
    profile: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def decay(self) -> float:
        """Per-level decay rate of the integral's annulus contributions."""
        return -level_slope(self.profile)

    def finite(self, tol: float = DEFAULT_SLOPE_TOL) -> Truth:
        return finite_from_decay(self.decay, self.diverged, tol)

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "error": float(self.error) if math.isfinite(self.error) else "inf",
            "diverged": bool(self.diverged),
            "profile": [float(x) for x in self.profile],
        }


def weighted_integral(f: AnalyticFn, q: float, sigma: float,
                      cfg: QuadratureConfig | None = None, log_power: float = 0.0) -> QuadResult:
    """``int |f|^q (1-|z|^2)^sigma log(2/(1-|z|^2))^log_power dA``.

    ``sigma`` is not restricted; non-integrable weights show up as divergence.
    """
    if f.is_zero:
        return QuadResult(0.0, 0.0, False, np.zeros(4))

    def F(z, w):
        out = np.abs(evaluate(f, z)) ** q * w ** sigma
        if log_power:
            out = out * np.log(2.0 / w) ** log_power
        return out

    return integrate_disk(F, cfg, focus=singular_angles(f))


def _norm(offset: float, res: QuadResult, p: float) -> NormResult:
    total = offset + float(np.real(res.value))
    value = total ** (1.0 / p) if total > 0 else 0.0
    if res.diverged:
        return NormResult(value, math.inf, True, res.levels)
    err = res.error / p * total ** (1.0 / p - 1.0) if total > 0 else res.error ** (1.0 / p)
    return NormResult(value, float(err), False, res.levels)


def bergman_norm(f: AnalyticFn, sp: SpaceParams, cfg: QuadratureConfig | None = None) -> NormResult:
    return _norm(0.0, weighted_integral(f, sp.p, sp.alpha, cfg), sp.p)


def norm_from_parts(value_at_zero: complex, deriv: AnalyticFn, sp: SpaceParams,
                    cfg: QuadratureConfig | None = None) -> NormResult:
    """Dirichlet norm of the function with the given value at 0 and derivative."""
    res = weighted_integral(deriv, sp.p, sp.alpha, cfg)
    return _norm(abs(value_at_zero) ** sp.p, res, sp.p)


def dirichlet_norm(f: AnalyticFn, sp: SpaceParams, cfg: QuadratureConfig | None = None) -> NormResult:
    return norm_from_parts(evaluate(f, 0.0), differentiate(f), sp, cfg)


class EvalKind(enum.Enum):
    VALUE = "value"
    DERIVATIVE = "derivative"


def predicted_rate(z: complex, sp: SpaceParams, kind: EvalKind | str = EvalKind.VALUE) -> float:
    """Asymptotic size of the point-evaluation functional at ``z`` (up to constants)."""
    kind = EvalKind(kind)
    w = 1.0 - abs(z) ** 2
    k = (sp.alpha + 2.0) / sp.p
    if kind is EvalKind.DERIVATIVE:
        return w ** (-k)
    regime = sp.regime
    if regime is Regime.SUBCRITICAL:
        return w ** (-(k - 1.0))
    if regime is Regime.CRITICAL:
        return math.log(2.0 / w) ** ((sp.p - 1.0) / sp.p)
    return 1.0


def probe_family(z: complex, sp: SpaceParams, max_degree: int = 6) -> list[AnalyticFn]:
    fam: list[AnalyticFn] = [monomial(n) for n in range(max_degree + 1)]
    if z != 0:
        kernel = testfunctions.fa(z, sp.p, sp.alpha)
        # the copy vanishing at 0 keeps |f(0)| from skewing the derivative rate
        fam += [kernel, kernel + constant(-evaluate(kernel, 0.0))]
        if sp.regime is Regime.CRITICAL:
            fam.append(testfunctions.log_probe(z, sp.p))
    return fam


def point_eval_norm(z: complex, sp: SpaceParams, kind: EvalKind | str = EvalKind.VALUE,
                    cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """Lower bound for ``||delta_z||`` (or ``||delta'_z||``) and the predicted rate.

    The bound is the largest ``|f(z)| / ||f||`` (resp. ``|f'(z)| / ||f||``)
    over monomials and the kernel probes centred at ``z``.
    """
    kind = EvalKind(kind)
    best = 0.0
    for f in probe_family(z, sp):
        norm = dirichlet_norm(f, sp, cfg)
        if norm.diverged or norm.value == 0:
            continue
        g = differentiate(f) if kind is EvalKind.DERIVATIVE else f
        best = max(best, abs(evaluate(g, z)) / norm.value)
    return best, predicted_rate(z, sp, kind)
