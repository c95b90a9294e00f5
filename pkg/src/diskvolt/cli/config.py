"""Resolved run configuration: defaults, then a key=value file, then flags."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from ..errors import HypothesisViolation
from ..quadrature import QuadratureConfig
from ..spaces import SpaceParams


class ConfigError(ValueError):
    """Malformed config file or out-of-domain parameter (exit status 2)."""


@dataclass
class RunConfig:
    command: str = "norm"
    symbol: str = "poly(0,1)"
    p: float = 2.0
    alpha: float = 0.0
    q: float = 4.0
    beta: float = 0.0
    op: str = "Tg"
    mode: str = "bounded"
    modes: str = ""
    space: str = "dirichlet"
    # Carleson profiles
    gauge: str = "auto"
    gauge_exponent: float = math.nan
    L: int = 12
    # growth profiles
    t: float = math.nan
    K: int = 24
    # quadrature overrides
    radial_levels: int = 24
    nodes: int = 16
    angular_nodes: int = 64
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    # sweeps
    sweep_param: str = ""
    sweep_start: float = math.nan
    sweep_stop: float = math.nan
    sweep_step: float = math.nan
    # audits
    regime: str = "auto"
    # output
    format: str = "json"
    output: str = ""
    seed: int = 0
    threads: int = 1
    strict: bool = False

    @property
    def sp_in(self) -> SpaceParams:
        return SpaceParams(self.p, self.alpha)

    @property
    def sp_out(self) -> SpaceParams:
        return SpaceParams(self.q, self.beta)

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(radial_levels=self.radial_levels, nodes_per_annulus=self.nodes,
                                angular_nodes=self.angular_nodes, abs_tol=self.abs_tol,
                                rel_tol=self.rel_tol)

    def validate(self, need_target: bool = False, need_p_less_q: bool = False):
        try:
            self.sp_in
            if need_target:
                self.sp_out
            self.quadrature()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.L < 8 or self.K < 8:
            raise ConfigError("L and K must be at least 8")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if need_p_less_q and not self.p < self.q:
            raise HypothesisViolation(f"needs p < q (got p={self.p}, q={self.q})")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, complex):
                v = repr(v).strip("()") if v.imag else v.real
            if isinstance(v, float) and not math.isfinite(v):
                v = None
            out[f.name] = v
        return out


_FIELDS = {f.name: f for f in fields(RunConfig)}
_ALIASES = {"symbol_string": "symbol", "depth": "L", "levels": "L", "threshold_param": "sweep_param"}


def _normalize(key: str) -> str:
    key = key.strip().replace("-", "_")
    return _ALIASES.get(key, key)


def _coerce(name: str, raw: Any) -> Any:
    target = _FIELDS[name].type
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if target == "bool":
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if target == "int":
            return int(text)
        if target == "float":
            return float(text)
        if target == "complex":
            return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc
    return text


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, Any] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = line.split("=", 1)
        key = _normalize(key)
        if key not in _FIELDS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def resolve(sources: list[Mapping[str, Any]]) -> RunConfig:
    """Later sources override earlier ones; ``None`` values are ignored."""
    cfg = RunConfig()
    for src in sources:
        for key, value in src.items():
            if value is None:
                continue
            key = _normalize(key)
            if key not in _FIELDS:
                raise ConfigError(f"unknown key {key!r}")
            setattr(cfg, key, _coerce(key, value))
    return dataclasses.replace(cfg)
