"""``diskvolt`` command-line interface.

Exit codes: 0 ok, 2 parse or usage error, 3 hypothesis violation,
4 tolerance failure, 5 inconclusive under ``--strict``, 6 audit inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from ..errors import (HypothesisViolation, InconclusiveNearThreshold, SymbolParseError,
                      ToleranceNotMet)
from . import commands
from .commands import (COMMANDS, EXIT_HYPOTHESIS, EXIT_INCONCLUSIVE, EXIT_PARSE,
                       EXIT_TOLERANCE)
from .config import ConfigError, RunConfig, read_config_file, resolve
from .grammar import parse_symbol

__all__ = ["main", "parse_symbol", "RunConfig", "build_parser"]


def _common(ap: argparse.ArgumentParser):
    ap.add_argument("--config", help="key=value file; flags override its entries")
    ap.add_argument("--symbol", help='analytic symbol, e.g. "pow(a=1,gamma=0.4)"')
    ap.add_argument("--p", type=float)
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--q", type=float)
    ap.add_argument("--beta", type=float)
    ap.add_argument("--L", type=int, help="Carleson profile depth")
    ap.add_argument("--K", type=int, help="number of growth radii")
    ap.add_argument("--radial-levels", type=int)
    ap.add_argument("--nodes", type=int, help="radial nodes per annulus")
    ap.add_argument("--angular-nodes", type=int)
    ap.add_argument("--abs-tol", type=float)
    ap.add_argument("--rel-tol", type=float)
    ap.add_argument("--format", choices=["json", "csv"])
    ap.add_argument("--output", help="write the report here instead of stdout")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--threads", type=int, help="worker threads (capped by DISKVOLT_THREADS)")
    ap.add_argument("--strict", action="store_true", default=None,
                    help="exit 5 when a verdict is inconclusive")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diskvolt",
                                 description="Norms, Carleson profiles and operator verdicts "
                                             "on weighted Dirichlet spaces of the disk.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="Bergman or Dirichlet norm of a symbol")
    _common(p)
    p.add_argument("--space", choices=["bergman", "dirichlet", "both"])

    p = sub.add_parser("check", help="bounded / compact / order-bounded verdict")
    _common(p)
    p.add_argument("--op", choices=["Tg", "Sg", "Mg"])
    p.add_argument("--mode", choices=["bounded", "compact", "order-bounded"])

    p = sub.add_parser("carleson", help="Carleson profile of the induced measure")
    _common(p)
    p.add_argument("--gauge", choices=["auto", "power", "log"])
    p.add_argument("--gauge-exponent", type=float, help="s for power, e for log")

    p = sub.add_parser("growth", help="growth profile of |g| (1-|z|^2)^t")
    _common(p)
    p.add_argument("--t", type=float)

    p = sub.add_parser("sweep", help="verdicts over a one-parameter grid (CSV)")
    _common(p)
    p.add_argument("--op", choices=["Tg", "Sg", "Mg"])
    p.add_argument("--mode", choices=["bounded", "compact", "order-bounded"])
    p.add_argument("--modes", help="comma-separated list of modes")
    p.add_argument("--sweep", nargs=4, metavar=("NAME", "START", "STOP", "STEP"))

    p = sub.add_parser("audit", help="equivalence audit over the built-in battery")
    _common(p)
    p.add_argument("--regime", choices=["auto", "supercritical", "subcritical"])
    p.add_argument("--inject-disagreement", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("report", help="everything applicable for one symbol")
    _common(p)
    return ap


def _flags(ns: argparse.Namespace) -> dict:
    out = {k: v for k, v in vars(ns).items()
           if k not in ("config", "sweep", "inject_disagreement")}
    if getattr(ns, "sweep", None):
        name, start, stop, step = ns.sweep
        out.update(sweep_param=name, sweep_start=start, sweep_stop=stop, sweep_step=step)
    return out


def _error(msg: str):
    print(f"diskvolt: error: {msg}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        sources = [read_config_file(ns.config)] if ns.config else []
        cfg = resolve(sources + [_flags(ns)])
        cfg.command = ns.command
        commands.INJECT_DISAGREEMENT = bool(getattr(ns, "inject_disagreement", False))
        status, text = COMMANDS[ns.command](cfg)
    except (SymbolParseError, ConfigError) as exc:
        _error(str(exc))
        return EXIT_PARSE
    except HypothesisViolation as exc:
        _error(str(exc))
        return EXIT_HYPOTHESIS
    except ToleranceNotMet as exc:
        _error(str(exc))
        return EXIT_TOLERANCE
    except InconclusiveNearThreshold as exc:
        _error(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    finally:
        commands.INJECT_DISAGREEMENT = False
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if status == EXIT_TOLERANCE:
        _error("quadrature error estimate above tolerance")
    elif status != 0:
        _error(f"exit status {status}")
    return status
