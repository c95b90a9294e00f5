"""Command implementations.  Each returns ``(exit_status, text)``."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from typing import Any, Callable

import numpy as np

from .. import operators as ops
from ..analytic import AnalyticFn, constant, monomial, power_kernel, log_kernel, series
from ..carleson import CarlesonMode, Gauge, MeasureSpec, carleson_profile, classify_carleson
from ..errors import HypothesisViolation
from ..parallel import pmap
from ..spaces import Regime, SpaceParams, bergman_norm, dirichlet_norm
from ..testfunctions import fa
from ..verdict import Truth
from .config import ConfigError, RunConfig
from .grammar import parse_symbol

SCHEMA = "diskvolt/1"
SWEEP_SCHEMA = "diskvolt-sweep/1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_TOLERANCE = 4
EXIT_INCONCLUSIVE = 5
EXIT_AUDIT = 6

# settings that change how a run executes but never what it computes
_EXECUTION_ONLY = ("threads", "output")


def embedded_config(cfg: RunConfig) -> dict:
    out = cfg.to_dict()
    for key in _EXECUTION_ONLY:
        out.pop(key, None)
    return out


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _envelope(cfg: RunConfig, result: Any) -> dict:
    return {"schema": SCHEMA, "command": cfg.command, "config": embedded_config(cfg), "result": result}


def _symbol(cfg: RunConfig, env=None) -> AnalyticFn:
    return parse_symbol(cfg.symbol, env, p=cfg.p, alpha=cfg.alpha)


def _csv(header: list[str], rows: list[list[Any]], comments: list[str]) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(x) for x in r])
    return buf.getvalue()


def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def _config_comments(cfg: RunConfig) -> list[str]:
    return [f"config {k}={_cell(v)}" for k, v in sorted(embedded_config(cfg).items())]


# -- norm ---------------------------------------------------------------------------

def cmd_norm(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    f = _symbol(cfg)
    qc = cfg.quadrature()
    spaces = ("bergman", "dirichlet") if cfg.space == "both" else (cfg.space,)
    result = {}
    status = EXIT_OK
    for name in spaces:
        if name == "bergman":
            res = bergman_norm(f, cfg.sp_in, qc)
        elif name == "dirichlet":
            res = dirichlet_norm(f, cfg.sp_in, qc)
        else:
            raise ConfigError(f"unknown space {name!r}")
        result[name] = res.to_dict()
        if not res.diverged and res.error > max(qc.abs_tol, qc.rel_tol * abs(res.value)):
            status = EXIT_TOLERANCE
    if cfg.format == "csv":
        rows = [[name, r["value"], r["error"], r["diverged"]] for name, r in result.items()]
        text = _csv(["space", "value", "error", "diverged"], rows, [f"schema={SCHEMA}"] + _config_comments(cfg))
    else:
        text = _dump(_envelope(cfg, result if len(result) > 1 else result[spaces[0]]))
    return status, text


# -- check --------------------------------------------------------------------------

def _verdict(cfg: RunConfig, g: AnalyticFn, mode: str, sp_in=None, sp_out=None):
    return ops.check(cfg.op, mode, g, sp_in or cfg.sp_in, sp_out or cfg.sp_out,
                     cfg.quadrature(), cfg.strict, L=cfg.L)


def cmd_check(cfg: RunConfig) -> tuple[int, str]:
    mode = ops.Mode(cfg.mode)
    cfg.validate(need_target=True, need_p_less_q=mode is not ops.Mode.ORDER_BOUNDED)
    v = _verdict(cfg, _symbol(cfg), mode.value)
    return EXIT_OK, _dump(_envelope(cfg, v.to_dict()))


# -- carleson -----------------------------------------------------------------------

def _gauge(cfg: RunConfig) -> Gauge:
    kind = cfg.gauge
    if kind == "auto":
        regime = cfg.sp_in.regime
        if regime is Regime.SUPERCRITICAL:
            raise ConfigError("no Carleson gauge in the supercritical regime; pass --gauge")
        kind = "power" if regime is Regime.SUBCRITICAL else "log"
    if kind == "power":
        s = cfg.gauge_exponent
        if math.isnan(s):
            s = ops.carleson_exponent(cfg.sp_in, cfg.sp_out)
        try:
            return Gauge.power(s)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if kind == "log":
        e = cfg.gauge_exponent
        if math.isnan(e):
            e = ops.log_gauge_exponent(cfg.sp_in, cfg.sp_out)
        return Gauge.log(e)
    raise ConfigError(f"unknown gauge {kind!r}")


def cmd_carleson(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate(need_target=True)
    g = _symbol(cfg)
    gauge = _gauge(cfg)
    mu = MeasureSpec.volterra(g, cfg.q, cfg.beta)
    prof = carleson_profile(mu, gauge, L=cfg.L, threads=cfg.threads)
    verdicts = {m.value: classify_carleson(prof, m).holds.value for m in CarlesonMode}
    if cfg.format == "csv":
        rows = [[lv.level, 2.0 ** -lv.level, gauge.abscissa(lv.level), lv.sup, lv.argmax_angle,
                 lv.tolerance_ok] for lv in prof.levels]
        comments = [f"schema={SCHEMA}"] + _config_comments(cfg)
        comments += [f"verdict {k}={v}" for k, v in sorted(verdicts.items())]
        return EXIT_OK, _csv(["l", "h", "x", "sup", "argmax_angle", "tolerance_ok"], rows, comments)
    out = prof.to_dict()
    out["verdicts"] = verdicts
    return EXIT_OK, _dump(_envelope(cfg, out))


# -- growth -------------------------------------------------------------------------

def cmd_growth(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate(need_target=True)
    g = _symbol(cfg)
    t = cfg.t if not math.isnan(cfg.t) else ops.growth_exponent(cfg.sp_in, cfg.sp_out)
    prof = ops.classify_growth(g, t, K=cfg.K)
    if cfg.format == "csv":
        rows = [[k + 1, float(r), float(m)] for k, (r, m) in enumerate(zip(prof.radii, prof.values))]
        comments = [f"schema={SCHEMA}"] + _config_comments(cfg)
        comments.append(f"classification={prof.classification} slope={_cell(prof.slope)}")
        return EXIT_OK, _csv(["k", "r", "M"], rows, comments)
    return EXIT_OK, _dump(_envelope(cfg, prof.to_dict()))


# -- sweep --------------------------------------------------------------------------

_SPACE_KEYS = ("p", "alpha", "q", "beta")


def sweep_grid(start: float, stop: float, step: float) -> list[float]:
    if any(math.isnan(x) for x in (start, stop, step)):
        raise ConfigError("sweep needs start, stop and step")
    if not step > 0 or stop < start:
        raise ConfigError("empty sweep grid")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]


def _tolerance_ok(v: ops.CriterionVerdict) -> bool:
    prof = v.evidence.get("carleson")
    if prof and not all(lv["tolerance_ok"] for lv in prof["levels"]):
        return False
    return True


def _sweep_row(cfg: RunConfig, name: str, value: float, modes: list[str]) -> dict:
    env = {}
    local = cfg
    if name in _SPACE_KEYS:
        local = dataclasses.replace(cfg, **{name: value})
    else:
        env[name] = value
    row: dict[str, Any] = {"value": value, "status": "ok", "modes": {}}
    try:
        sp_in, sp_out = local.sp_in, local.sp_out
    except ValueError:
        row["status"] = "domain"
        return row
    g = parse_symbol(cfg.symbol, env, p=local.p, alpha=local.alpha)
    for mode in modes:
        try:
            v = ops.check(cfg.op, mode, g, sp_in, sp_out, cfg.quadrature(), False, L=cfg.L)
        except HypothesisViolation:
            row["status"] = "hypothesis"
            row["modes"][mode] = ("n/a", [], [])
            continue
        th = v.threshold
        predicted = [th[k] for k in sorted(th) if k.startswith("predicted")]
        measured = [th[k] for k in sorted(th) if k.startswith("measured")]
        row["modes"][mode] = (v.holds.value, predicted, measured)
        if not _tolerance_ok(v):
            row["status"] = "tolerance"
    return row


def threshold_estimate(values: list[float], verdicts: list[str]) -> tuple[float, int]:
    """Midpoint of the first holds/fails change among decided grid points."""
    decided = [(x, v) for x, v in zip(values, verdicts) if v in ("holds", "fails")]
    changes = [(a, b) for (a, va), (b, vb) in zip(decided, decided[1:]) if va != vb]
    if not changes:
        return math.nan, 0
    a, b = changes[0]
    return 0.5 * (a + b), len(changes)


def _join(xs) -> str:
    return "|".join(_cell(float(x)) for x in xs)


def cmd_sweep(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate(need_target=True)
    if not cfg.sweep_param:
        raise ConfigError("sweep needs a parameter name")
    grid = sweep_grid(cfg.sweep_start, cfg.sweep_stop, cfg.sweep_step)
    modes = [m.strip() for m in (cfg.modes or cfg.mode).split(",") if m.strip()]
    modes = [ops.Mode(m).value for m in modes]
    parse_symbol(cfg.symbol, {cfg.sweep_param: grid[0]}, p=cfg.p, alpha=cfg.alpha)
    rows = pmap(lambda x: _sweep_row(cfg, cfg.sweep_param, x, modes), grid, cfg.threads)
    thresholds = {}
    for m in modes:
        verdicts = [r["modes"].get(m, ("n/a",))[0] for r in rows]
        thresholds[m] = threshold_estimate(grid, verdicts)
    header = ["param", "value"]
    for m in modes:
        header += [f"{m}:holds", f"{m}:predicted", f"{m}:measured", f"{m}:threshold"]
    header.append("status")
    table = []
    for r in rows:
        line: list[Any] = [cfg.sweep_param, r["value"]]
        for m in modes:
            holds, pred, meas = r["modes"].get(m, ("n/a", [], []))
            line += [holds, _join(pred), _join(meas), thresholds[m][0]]
        line.append(r["status"])
        table.append(line)
    comments = [f"schema={SWEEP_SCHEMA}"] + _config_comments(cfg)
    comments += [f"transitions {m}={thresholds[m][1]}" for m in modes]
    if cfg.format == "json":
        out = {"grid": grid, "rows": [dict(zip(header, [_cell(x) for x in ln])) for ln in table],
               "thresholds": {m: _cell(thresholds[m][0]) for m in modes},
               "transitions": {m: thresholds[m][1] for m in modes}}
        return EXIT_OK, _dump(_envelope(cfg, out))
    return EXIT_OK, _csv(header, table, comments)


# -- audit --------------------------------------------------------------------------

AUDIT_PRESETS = {
    "supercritical": (3.0, 0.0, 4.0, 2.0),
    "subcritical": (1.0, 0.0, 1.5, 3.0),
}

BATTERY_GAMMAS = (-0.9, -0.75, -0.3, 0.25, 0.5, 1.0, 1.7, 2.5)


def audit_battery() -> list[AnalyticFn]:
    """Constants, polynomials, interior kernels, boundary kernels across a gamma grid, logs."""
    out: list[AnalyticFn] = [constant(1.0), constant(2.5), constant(-1 + 1j)]
    out += [monomial(1), monomial(2), monomial(3), monomial(5), series([1.0, -1.0, 0.5])]
    out += [power_kernel(0.5, 2.0), power_kernel(0.5j, 1.5), log_kernel(0.5, 2)]
    out += [power_kernel(1.0, gam) for gam in BATTERY_GAMMAS]
    out += [log_kernel(1.0, m) for m in (1, 2, 3)]
    out += [power_kernel(1j, 0.5), monomial(1) + power_kernel(-1.0, -0.75)]
    return out


@dataclasses.dataclass
class BatteryEntry:
    report: ops.AuditReport
    implications: dict[str, dict[str, str]]

    @property
    def violations(self) -> list[str]:
        return [op for op, v in self.implications.items()
                if v["compact"] == Truth.HOLDS.value and v["bounded"] != Truth.HOLDS.value]

    def to_dict(self) -> dict:
        out = self.report.to_dict()
        out["implications"] = self.implications
        out["implication_violations"] = self.violations
        return out


def audit_entry(g: AnalyticFn, sp_in: SpaceParams, sp_out: SpaceParams, qc=None,
                L: int = 12) -> BatteryEntry:
    report = ops.equivalence_audit(g, sp_in, sp_out, qc, L=L)
    implications = {}
    if sp_in.p < sp_out.p:
        for kind in ops.OperatorKind:
            b = ops.check_bounded(kind, g, sp_in, sp_out, qc, L=L)
            c = ops.check_compact(kind, g, sp_in, sp_out, qc, L=L)
            implications[kind.value] = {"bounded": b.holds.value, "compact": c.holds.value}
            if kind is ops.OperatorKind.MG:
                implications[kind.value]["components"] = b.evidence.get("components", {})
    return BatteryEntry(report, implications)


def run_battery(sp_in: SpaceParams, sp_out: SpaceParams, qc=None, threads: int | None = None,
                L: int = 12, symbols: list[AnalyticFn] | None = None) -> list[BatteryEntry]:
    symbols = audit_battery() if symbols is None else symbols
    return pmap(lambda g: audit_entry(g, sp_in, sp_out, qc, L), symbols, threads)


# test hook: flips one decided verdict so the tripwire can be exercised
INJECT_DISAGREEMENT = False


def _inject(entries: list[BatteryEntry]):
    for e in entries:
        for key, val in e.report.verdicts.items():
            if val.decided:
                e.report.verdicts[key] = Truth.FAILS if val is Truth.HOLDS else Truth.HOLDS
                e.report.disagreements[:] = ops._disagreements(e.report.verdicts)
                return


def cmd_audit(cfg: RunConfig) -> tuple[int, str]:
    if cfg.regime in AUDIT_PRESETS:
        p, alpha, q, beta = AUDIT_PRESETS[cfg.regime]
        cfg = dataclasses.replace(cfg, p=p, alpha=alpha, q=q, beta=beta)
    elif cfg.regime != "auto":
        raise ConfigError(f"unknown regime {cfg.regime!r}")
    cfg.validate(need_target=True)
    entries = run_battery(cfg.sp_in, cfg.sp_out, cfg.quadrature(), cfg.threads, cfg.L)
    if INJECT_DISAGREEMENT:
        _inject(entries)
    disagreements = sum(len(e.report.disagreements) for e in entries)
    violations = sum(len(e.violations) for e in entries)
    mg_split = [e.report.symbol for e in entries
                if len(set(e.implications.get("Mg", {}).get("components", {}).values()) - {"inconclusive"}) > 1]
    result = {
        "regime": cfg.sp_in.regime.value,
        "symbols": len(entries),
        "disagreements": disagreements,
        "implication_violations": violations,
        "mg_component_splits": mg_split,
        "consistent": disagreements == 0 and violations == 0,
        "entries": [e.to_dict() for e in entries],
    }
    status = EXIT_OK if result["consistent"] else EXIT_AUDIT
    return status, _dump(_envelope(cfg, result))


# -- report -------------------------------------------------------------------------

def cmd_report(cfg: RunConfig) -> tuple[int, str]:
    """Every applicable quantity for one symbol and parameter tuple."""
    cfg.validate(need_target=True)
    g = _symbol(cfg)
    qc = cfg.quadrature()
    sp_in, sp_out = cfg.sp_in, cfg.sp_out
    rng = np.random.default_rng(cfg.seed)
    family = ops.default_family(g, sp_in)
    for _ in range(4):
        rad = 1.0 - 2.0 ** -rng.uniform(1.0, 8.0)
        family.append(fa(rad * np.exp(2j * math.pi * rng.uniform()), sp_in.p, sp_in.alpha))
    out: dict[str, Any] = {
        "regime": sp_in.regime.value,
        "norms": {
            "bergman": bergman_norm(g, sp_in, qc).to_dict(),
            "dirichlet": dirichlet_norm(g, sp_in, qc).to_dict(),
            "dirichlet_target": dirichlet_norm(g, sp_out, qc).to_dict(),
        },
        "growth": ops.classify_growth(g, ops.growth_exponent(sp_in, sp_out), K=cfg.K).to_dict(),
        "operators": {},
    }
    for kind in ops.OperatorKind:
        entry: dict[str, Any] = {
            "order-bounded": ops.check_order_bounded(kind, g, sp_in, sp_out, qc).to_dict(),
            "opnorm_lower_bound": _json_float(ops.opnorm_lower_bound(kind, g, sp_in, sp_out, family, qc)),
        }
        if sp_in.p < sp_out.p:
            entry["bounded"] = ops.check_bounded(kind, g, sp_in, sp_out, qc, L=cfg.L).to_dict()
            entry["compact"] = ops.check_compact(kind, g, sp_in, sp_out, qc, L=cfg.L).to_dict()
        else:
            entry["bounded"] = entry["compact"] = "not applicable: needs p < q"
        out["operators"][kind.value] = entry
    return EXIT_OK, _dump(_envelope(cfg, out))


def _json_float(x: float):
    return _cell(float(x)) if not math.isfinite(x) else float(x)


COMMANDS: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
    "norm": cmd_norm,
    "check": cmd_check,
    "carleson": cmd_carleson,
    "growth": cmd_growth,
    "sweep": cmd_sweep,
    "audit": cmd_audit,
    "report": cmd_report,
}
