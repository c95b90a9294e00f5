"""Volterra-type operators ``T_g``, ``S_g``, ``M_g`` and their verdict engines.

``T_g f = int_0^z f g'``, ``S_g f = int_0^z f' g`` and ``M_g f = g f``, so
``M_g f = f(0) g(0) + T_g f + S_g f``.

Every ``check_*`` function dispatches on the regime of the domain space
``D^p_alpha`` (``p`` against ``alpha + 2``) and evaluates the matching
criterion numerically:

=============  ==================================  ==========================
operator       bounded / compact                   order bounded
=============  ==================================  ==========================
``T_g``        Carleson profile of mu_{g,q,beta}   weighted integral of g'
``S_g``        growth of ``|g| (1-|z|^2)^t``       weighted integral of g
``M_g``        both of the above                   regime-dependent integrals
=============  ==================================  ==========================

with ``t = (2+beta)/q - (2+alpha)/p``: ``S_g`` needs
``|g(z)| = O((1-|z|^2)^((2+alpha)/p - (2+beta)/q))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import testfunctions
from .analytic import (DEFAULT_DEGREE, AnalyticFn, antidifferentiate, constant, differentiate,
                       evaluate, monomial, multiply, singular_angles)
from .carleson import (CarlesonMode, Gauge, MeasureSpec, carleson_profile, classify_carleson,
                       total_mass)
from .errors import HypothesisViolation, InconclusiveNearThreshold
from .quadrature import QuadratureConfig
from .spaces import (NormResult, Regime, SpaceParams, dirichlet_norm, norm_from_parts,
                     weighted_integral)
from .verdict import (DEFAULT_SLOPE_TOL, GROWTH_SLOPE_TOL, Truth, all_of, bounded_from_slope,
                      vanishing_from_slope)


class OperatorKind(enum.Enum):
    TG = "Tg"
    SG = "Sg"
    MG = "Mg"


class Mode(enum.Enum):
    BOUNDED = "bounded"
    COMPACT = "compact"
    ORDER_BOUNDED = "order-bounded"

    @classmethod
    def _missing_(cls, value):
        aliases = {"order": cls.ORDER_BOUNDED, "order_bounded": cls.ORDER_BOUNDED,
                   "orderbounded": cls.ORDER_BOUNDED}
        return aliases.get(value)


# -- operator application ---------------------------------------------------------

def apply(kind: OperatorKind | str, g: AnalyticFn, f: AnalyticFn, N: int = DEFAULT_DEGREE):
    """Image of ``f`` as a power series of degree at most ``N + 1``."""
    kind = OperatorKind(kind)
    if kind is OperatorKind.TG:
        return antidifferentiate(multiply(f, differentiate(g), N))
    if kind is OperatorKind.SG:
        return antidifferentiate(multiply(differentiate(f), g, N))
    return multiply(g, f, N)


def image_parts(kind: OperatorKind | str, g: AnalyticFn, f: AnalyticFn) -> tuple[complex, AnalyticFn]:
    """Value at the origin and closed-form derivative of the image of ``f``."""
    kind = OperatorKind(kind)
    if kind is OperatorKind.TG:
        return 0.0, f * differentiate(g)
    if kind is OperatorKind.SG:
        return 0.0, differentiate(f) * g
    return evaluate(f, 0.0) * evaluate(g, 0.0), differentiate(f) * g + f * differentiate(g)


class TestFunctionKind(enum.Enum):
    FA = "fa"
    FA_SHIFTED = "Fa"
    FZ_ORDER = "fz_order"
    FZ_LOG = "fz_log"


def make_test_function(kind: TestFunctionKind | str, a: complex, sp: SpaceParams) -> AnalyticFn:
    kind = TestFunctionKind(kind)
    if abs(a) >= 1:
        raise ValueError("test-function base must lie in the open disk")
    if kind is TestFunctionKind.FA:
        return testfunctions.fa(a, sp.p, sp.alpha)
    if kind is TestFunctionKind.FA_SHIFTED:
        return testfunctions.Fa(a, sp.p, sp.alpha)
    if kind is TestFunctionKind.FZ_ORDER:
        return testfunctions.fz_order(a, sp.p, sp.alpha)
    return testfunctions.fz_log(a, sp.p)


# -- growth -----------------------------------------------------------------------

@dataclass
class GrowthProfile:
    exponent: float
    radii: np.ndarray
    values: np.ndarray
    slope: float
    big_o: Truth
    little_o: Truth

    @property
    def classification(self) -> str:
        if self.little_o is Truth.HOLDS:
            return "LittleO"
        if self.big_o is Truth.HOLDS:
            return "BigO"
        if self.big_o is Truth.FAILS:
            return "Neither"
        return "inconclusive"

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "radii": [float(r) for r in self.radii],
            "values": [float(v) for v in self.values],
            "slope": _num(self.slope),
            "big_o": self.big_o.value,
            "little_o": self.little_o.value,
            "classification": self.classification,
        }


def _growth_angles(foci: Sequence[float], depth: float, n_uniform: int) -> np.ndarray:
    parts = [np.linspace(0.0, 2 * math.pi, n_uniform, endpoint=False)]
    offsets = depth * np.linspace(-4.0, 4.0, 33)
    for f in foci:
        parts.append(f + offsets)
    return np.concatenate(parts)


def classify_growth(g: AnalyticFn, t: float, K: int = 24, n_angles: int = 256,
                    slope_tol: float = GROWTH_SLOPE_TOL) -> GrowthProfile:
    """Sup of ``|g(z)| (1-|z|^2)^t`` on the circles ``|z| = 1 - 2^-k``, ``k = 1..K``."""
    if K < 8:
        raise ValueError("need at least 8 radii")
    ks = np.arange(1, K + 1)
    s = 2.0 ** -ks
    radii = 1.0 - s
    if g.is_zero:
        zeros = np.zeros(K)
        return GrowthProfile(t, radii, zeros, -math.inf, Truth.HOLDS, Truth.HOLDS)
    foci = singular_angles(g, min_modulus=0.0)
    vals = np.empty(K)
    for i, (r, sk) in enumerate(zip(radii, s)):
        theta = _growth_angles(foci, sk, n_angles)
        z = r * np.exp(1j * theta)
        w = sk * (2.0 - sk)
        vals[i] = float(np.max(np.abs(evaluate(g, z)))) * w ** t
    window = slice(K - K // 2, K)
    y = vals[window]
    if np.any(y <= 0):
        slope = -math.inf if not np.any(y > 0) else math.nan
    else:
        slope = float(np.polyfit(ks[window] * math.log(2.0), np.log(y), 1)[0])
    big = bounded_from_slope(slope, slope_tol) if slope != -math.inf else Truth.HOLDS
    little = vanishing_from_slope(slope, vals[0], vals[-1], slope_tol)
    return GrowthProfile(t, radii, vals, slope, big, little)


def growth_exponent(sp_in: SpaceParams, sp_out: SpaceParams) -> float:
    """Exponent ``t`` with ``S_g`` bounded iff ``|g| (1-|z|^2)^t`` stays bounded."""
    return (2.0 + sp_out.alpha) / sp_out.p - (2.0 + sp_in.alpha) / sp_in.p


def carleson_exponent(sp_in: SpaceParams, sp_out: SpaceParams) -> float:
    p, alpha, q = sp_in.p, sp_in.alpha, sp_out.p
    return q * (alpha + 2.0 - p) / p


def log_gauge_exponent(sp_in: SpaceParams, sp_out: SpaceParams) -> float:
    return (1.0 / sp_in.p - 1.0) * sp_out.p


# -- verdicts -----------------------------------------------------------------------

@dataclass
class CriterionVerdict:
    operator: OperatorKind
    mode: Mode
    regime: Regime
    criterion: str
    holds: Truth
    evidence: dict[str, Any] = field(default_factory=dict)
    threshold: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "operator": self.operator.value,
            "mode": self.mode.value,
            "regime": self.regime.value,
            "criterion": self.criterion,
            "holds": self.holds.value,
            "evidence": self.evidence,
            "threshold": {k: _num(v) for k, v in self.threshold.items()},
        }


def _num(x):
    if x is None or isinstance(x, str):
        return x
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


@dataclass
class _Part:
    holds: Truth
    criterion: str
    evidence: dict
    threshold: dict


def _require_p_less_q(sp_in: SpaceParams, sp_out: SpaceParams):
    if not sp_in.p < sp_out.p:
        raise HypothesisViolation(f"criterion needs p < q (got p={sp_in.p}, q={sp_out.p})")


def _integral_part(name: str, res: NormResult, slope_tol: float) -> _Part:
    return _Part(res.finite(slope_tol), name, {"integral": res.to_dict()},
                 {"predicted": 0.0, "measured": res.decay})


_PROFILE_CACHE: dict = {}
_PROFILE_CACHE_SIZE = 256


def _cached_profile(mu: MeasureSpec, gauge: Gauge, L: int):
    # bounded and compact checks of one symbol share the same profile
    key = (mu.kind, tuple(sorted(mu.params.items())), gauge, L)
    prof = _PROFILE_CACHE.get(key)
    if prof is None:
        prof = carleson_profile(mu, gauge, L=L)
        if len(_PROFILE_CACHE) >= _PROFILE_CACHE_SIZE:
            _PROFILE_CACHE.pop(next(iter(_PROFILE_CACHE)))
        _PROFILE_CACHE[key] = prof
    return prof


def _volterra_part(g, sp_in, sp_out, cfg, compact: bool, slope_tol: float, L: int) -> _Part:
    """Criterion shared by ``T_g`` (and the ``T_g``-half of ``M_g``)."""
    q, beta = sp_out.p, sp_out.alpha
    mu = MeasureSpec.volterra(g, q, beta)
    regime = sp_in.regime
    if regime is Regime.SUPERCRITICAL:
        res = total_mass(mu, cfg)
        return _integral_part("finite-measure", res, slope_tol)
    mode = CarlesonMode.VANISHING if compact else CarlesonMode.BOUNDED
    if regime is Regime.SUBCRITICAL:
        s = carleson_exponent(sp_in, sp_out)
        prof = _cached_profile(mu, Gauge.power(s), L)
        v = classify_carleson(prof, mode, slope_tol)
        name = ("vanishing-" if compact else "") + f"{s:g}-carleson"
        return _Part(v.holds, name, {"carleson": prof.to_dict(v)},
                     {"predicted": s, "measured": s - prof.slope})
    e = log_gauge_exponent(sp_in, sp_out)
    prof = _cached_profile(mu, Gauge.log(e), L)
    v = classify_carleson(prof, mode, slope_tol)
    name = ("vanishing-" if compact else "") + f"log-carleson({e:g})"
    return _Part(v.holds, name, {"carleson": prof.to_dict(v)},
                 {"predicted": 0.0, "measured": prof.slope})


def _growth_part(g, sp_in, sp_out, compact: bool, growth_tol: float) -> _Part:
    t = growth_exponent(sp_in, sp_out)
    prof = classify_growth(g, t, slope_tol=growth_tol)
    holds = prof.little_o if compact else prof.big_o
    name = ("little-o" if compact else "big-O") + f" growth (1-|z|^2)^{-t:g}"
    return _Part(holds, name, {"growth": prof.to_dict()},
                 {"predicted": t, "measured": prof.slope + t})


def _combine(kind, mode, regime, parts: list[_Part], strict: bool) -> CriterionVerdict:
    holds = all_of(*(pt.holds for pt in parts))
    evidence: dict[str, Any] = {}
    for pt in parts:
        evidence.update(pt.evidence)
    if len(parts) > 1:
        evidence["components"] = {pt.criterion: pt.holds.value for pt in parts}
    v = CriterionVerdict(kind, mode, regime, " and ".join(pt.criterion for pt in parts),
                         holds, evidence, parts[0].threshold if len(parts) == 1 else
                         {f"{k}[{i}]": val for i, pt in enumerate(parts) for k, val in pt.threshold.items()})
    if strict and holds is Truth.INCONCLUSIVE:
        raise InconclusiveNearThreshold(f"{kind.value} {mode.value}: {v.criterion}")
    return v


def _check_operator_theory(kind, g, sp_in, sp_out, cfg, compact, strict, slope_tol,
                           growth_tol, L):
    kind = OperatorKind(kind)
    _require_p_less_q(sp_in, sp_out)
    mode = Mode.COMPACT if compact else Mode.BOUNDED
    parts = []
    if kind in (OperatorKind.TG, OperatorKind.MG):
        parts.append(_volterra_part(g, sp_in, sp_out, cfg, compact, slope_tol, L))
    if kind in (OperatorKind.SG, OperatorKind.MG):
        parts.append(_growth_part(g, sp_in, sp_out, compact, growth_tol))
    return _combine(kind, mode, sp_in.regime, parts, strict)


def check_bounded(kind: OperatorKind | str, g: AnalyticFn, sp_in: SpaceParams, sp_out: SpaceParams,
                  cfg: QuadratureConfig | None = None, strict: bool = False,
                  slope_tol: float = DEFAULT_SLOPE_TOL, growth_tol: float = GROWTH_SLOPE_TOL,
                  L: int = 12) -> CriterionVerdict:
    """Boundedness of ``kind_g : D^p_alpha -> D^q_beta`` for ``p < q``."""
    return _check_operator_theory(kind, g, sp_in, sp_out, cfg, False, strict, slope_tol,
                                  growth_tol, L)


def check_compact(kind: OperatorKind | str, g: AnalyticFn, sp_in: SpaceParams, sp_out: SpaceParams,
                  cfg: QuadratureConfig | None = None, strict: bool = False,
                  slope_tol: float = DEFAULT_SLOPE_TOL, growth_tol: float = GROWTH_SLOPE_TOL,
                  L: int = 12) -> CriterionVerdict:
    """Compactness of ``kind_g : D^p_alpha -> D^q_beta`` for ``p < q``."""
    return _check_operator_theory(kind, g, sp_in, sp_out, cfg, True, strict, slope_tol,
                                  growth_tol, L)


def order_bounded_integrals(kind: OperatorKind | str, g: AnalyticFn, sp_in: SpaceParams,
                            sp_out: SpaceParams, cfg: QuadratureConfig | None = None):
    """The weighted integrals whose finiteness characterizes order boundedness.

    Returns ``(name, NormResult)`` pairs; the operator is order bounded iff
    all of them are finite.
    """
    kind = OperatorKind(kind)
    p, alpha = sp_in.p, sp_in.alpha
    q, beta = sp_out.p, sp_out.alpha
    regime = sp_in.regime
    dg = differentiate(g)

    def integral(f, sigma, log_power=0.0):
        res = weighted_integral(f, q, sigma, cfg, log_power)
        return NormResult(float(np.real(res.value)), res.error, res.diverged, res.levels)

    def tg_integral():
        if regime is Regime.SUBCRITICAL:
            sigma = beta - q * (alpha + 2.0 - p) / p
            return (f"|g'|^q (1-|z|^2)^{sigma:g}", integral(dg, sigma))
        if regime is Regime.CRITICAL:
            lp = -q * (1.0 - p) / p
            return (f"|g'|^q (1-|z|^2)^{beta:g} log(2/(1-|z|^2))^{lp:g}", integral(dg, beta, lp))
        return ("g in D^q_beta", integral(dg, beta))

    sg_sigma = beta - q * (alpha + 2.0) / p
    sg = (f"|g|^q (1-|z|^2)^{sg_sigma:g}", integral(g, sg_sigma))
    if kind is OperatorKind.TG:
        return [tg_integral()]
    if kind is OperatorKind.SG:
        return [sg]
    if regime is Regime.SUBCRITICAL:
        return [sg]
    if regime is Regime.CRITICAL:
        return [(f"|g|^q (1-|z|^2)^{beta - q:g}", integral(g, beta - q)), tg_integral()]
    return [("g in D^q_beta", integral(dg, beta)), sg]


def check_order_bounded(kind: OperatorKind | str, g: AnalyticFn, sp_in: SpaceParams,
                        sp_out: SpaceParams, cfg: QuadratureConfig | None = None,
                        strict: bool = False, slope_tol: float = DEFAULT_SLOPE_TOL) -> CriterionVerdict:
    """Order boundedness of ``kind_g : D^p_alpha -> D^q_beta`` (any ``p, q > 0``)."""
    kind = OperatorKind(kind)
    parts = [_integral_part(name, res, slope_tol)
             for name, res in order_bounded_integrals(kind, g, sp_in, sp_out, cfg)]
    return _combine(kind, Mode.ORDER_BOUNDED, sp_in.regime, parts, strict)


def check(kind, mode: Mode | str, g, sp_in, sp_out, cfg=None, strict=False, **kw) -> CriterionVerdict:
    mode = Mode(mode)
    if mode is Mode.BOUNDED:
        return check_bounded(kind, g, sp_in, sp_out, cfg, strict, **kw)
    if mode is Mode.COMPACT:
        return check_compact(kind, g, sp_in, sp_out, cfg, strict, **kw)
    kw.pop("growth_tol", None)
    kw.pop("L", None)
    return check_order_bounded(kind, g, sp_in, sp_out, cfg, strict, **kw)


# -- empirical corroboration ----------------------------------------------------------

def default_family(g: AnalyticFn, sp_in: SpaceParams, depth: int = 8) -> list[AnalyticFn]:
    angles = singular_angles(g) or (0.0,)
    fam: list[AnalyticFn] = [constant(1.0), monomial(1), monomial(2)]
    for phi in angles:
        for k in range(1, depth + 1):
            a = (1.0 - 2.0 ** -k) * complex(math.cos(phi), math.sin(phi))
            fam.append(testfunctions.fa(a, sp_in.p, sp_in.alpha))
    return fam


def opnorm_ratios(kind: OperatorKind | str, g: AnalyticFn, sp_in: SpaceParams, sp_out: SpaceParams,
                  family: Iterable[AnalyticFn], cfg: QuadratureConfig | None = None) -> list[float]:
    """``||K f|| / ||f||`` for each family member (``nan`` when the input norm diverges)."""
    out = []
    for f in family:
        n_in = dirichlet_norm(f, sp_in, cfg)
        if n_in.diverged or n_in.value == 0:
            out.append(math.nan)
            continue
        v0, dv = image_parts(kind, g, f)
        n_out = norm_from_parts(v0, dv, sp_out, cfg)
        out.append(math.inf if n_out.diverged else n_out.value / n_in.value)
    return out


def opnorm_lower_bound(kind: OperatorKind | str, g: AnalyticFn, sp_in: SpaceParams,
                       sp_out: SpaceParams, family: Sequence[AnalyticFn] | None = None,
                       cfg: QuadratureConfig | None = None) -> float:
    """Largest ``||K f||_{D^q_beta} / ||f||_{D^p_alpha}`` over the test family."""
    fam = list(family) if family is not None else default_family(g, sp_in)
    if not fam:
        raise ValueError("test family must be nonempty")
    ratios = [r for r in opnorm_ratios(kind, g, sp_in, sp_out, fam, cfg) if not math.isnan(r)]
    return max(ratios) if ratios else math.nan


# -- equivalence audits -----------------------------------------------------------------

@dataclass
class AuditReport:
    corollary: str
    symbol: str
    verdicts: dict[str, Truth]
    disagreements: list[tuple[str, str]]
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "corollary": self.corollary,
            "symbol": self.symbol,
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
            "disagreements": [list(d) for d in self.disagreements],
            "consistent": self.consistent,
            "notes": self.notes,
        }


def _disagreements(verdicts: dict[str, Truth]) -> list[tuple[str, str]]:
    names = list(verdicts)
    out = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            va, vb = verdicts[a], verdicts[b]
            if va.decided and vb.decided and va is not vb:
                out.append((a, b))
    return out


def equivalence_audit(g: AnalyticFn, sp_in: SpaceParams, sp_out: SpaceParams,
                      cfg: QuadratureConfig | None = None, L: int = 12) -> AuditReport:
    """Compute every verdict an equivalence statement ties together and compare them.

    Supercritical with ``p < q``: ``T_g`` bounded, compact, order bounded and
    ``g in D^q_beta``.  Subcritical: ``T_g``, ``S_g``, ``M_g`` order bounded
    and ``g in A^q_sigma`` with ``sigma = beta - q (alpha+2)/p``.
    """
    regime = sp_in.regime
    q, beta = sp_out.p, sp_out.alpha
    notes: dict[str, Any] = {}
    if regime is Regime.SUPERCRITICAL:
        _require_p_less_q(sp_in, sp_out)
        verdicts = {
            "Tg bounded": check_bounded("Tg", g, sp_in, sp_out, cfg, L=L).holds,
            "Tg compact": check_compact("Tg", g, sp_in, sp_out, cfg, L=L).holds,
            "Tg order bounded": check_order_bounded("Tg", g, sp_in, sp_out, cfg).holds,
            "g in D^q_beta": dirichlet_norm(g, sp_out, cfg).finite(),
        }
        name = "supercritical"
    elif regime is Regime.SUBCRITICAL:
        sigma = beta - q * (sp_in.alpha + 2.0) / sp_in.p
        res = weighted_integral(g, q, sigma, cfg)
        member = NormResult(float(np.real(res.value)), res.error, res.diverged, res.levels)
        verdicts = {
            "Tg order bounded": check_order_bounded("Tg", g, sp_in, sp_out, cfg).holds,
            "Sg order bounded": check_order_bounded("Sg", g, sp_in, sp_out, cfg).holds,
            "Mg order bounded": check_order_bounded("Mg", g, sp_in, sp_out, cfg).holds,
            "g in A^q_sigma": member.finite(),
        }
        notes["sigma"] = sigma
        name = "subcritical"
    else:
        raise HypothesisViolation("no equivalence statement in the critical regime")
    return AuditReport(name, g.to_symbol(), verdicts, _disagreements(verdicts), notes)
