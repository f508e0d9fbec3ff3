"""Run configurations for the command-line front end.

A config file is a flat TOML table of keys for one command. Command-line
``--set key=value`` pairs override file values. Unknown keys and out-of-range
values raise :class:`ConfigError` naming the key, before anything is computed.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


@dataclass
class TimeGrid:
    t_min: float = 0.0
    t_max: float = 10.0
    steps: int = 11
    spacing: str = "linear"

    def _check_grid(self, need_positive: bool = False) -> None:
        _require(self.t_min >= 0, "t_min", "must be non-negative")
        _require(self.t_max >= self.t_min, "t_max", "must be >= t_min")
        _require(self.steps >= 1, "steps", "must be a positive integer")
        _require(self.spacing in ("linear", "log"), "spacing", "must be 'linear' or 'log'")
        if self.spacing == "log" or need_positive:
            _require(self.t_min > 0, "t_min", "must be positive for this grid")
        if self.steps > 1:
            _require(self.t_max > self.t_min, "t_max", "must exceed t_min when steps > 1")


@dataclass
class EvolveConfig(TimeGrid):
    n: int = 5
    l: int = 1
    omega: float = 0.5
    graph: str = "segment"
    dissipator: str = "global"
    method: str = "auto"
    guard_tol: float = 1e-8

    def validate(self) -> None:
        self._check_grid()
        _require(self.n >= 1, "n", "must be a positive integer")
        _require(self.graph in ("segment", "truncated_line"), "graph", "must be 'segment' or 'truncated_line'")
        if self.graph == "truncated_line":
            _require(self.n % 2 == 1, "n", "must be odd for a truncated line")
            w = (self.n - 1) // 2
            _require(-w <= self.l <= w, "l", f"must be a vertex label in {-w}..{w}")
        else:
            _require(1 <= self.l <= self.n, "l", f"must be a vertex label in 1..{self.n}")
        _check_omega(self.omega, "omega")
        _require(self.dissipator in ("global", "local"), "dissipator", "must be 'global' or 'local'")
        _require(self.method in ("auto", "dense", "sparse", "spectral"), "method", "unknown method")
        if self.method == "spectral":
            _require(self.dissipator == "global", "method", "spectral propagation needs the global dissipator")
        _require(self.guard_tol > 0, "guard_tol", "must be positive")


@dataclass
class AnalyticConfig(TimeGrid):
    mode: str = "segment"
    n: int = 5
    l: int = 1
    omega: float = 0.5
    k_max: int = 5
    nodes: int = 0
    tol: float = 1e-13
    series_t_max: float = 5.0

    def validate(self) -> None:
        modes = ("segment", "segment_asymptotic", "line_quadrature", "line_series")
        _require(self.mode in modes, "mode", f"must be one of {', '.join(modes)}")
        _require(self.n >= 1, "n", "must be a positive integer")
        _require(1 <= self.l <= self.n, "l", f"must be a vertex label in 1..{self.n}")
        if self.mode == "segment_asymptotic":
            _require(0.0 < self.omega <= 1.0, "omega", "must lie in (0, 1] for the long-time limit")
        else:
            _check_omega(self.omega, "omega")
            self._check_grid()
        _require(self.k_max >= 0, "k_max", "must be non-negative")
        _require(self.nodes == 0 or self.nodes >= 8, "nodes", "must be 0 (automatic) or at least 8")
        _require(self.tol > 0, "tol", "must be positive")
        _require(self.series_t_max > 0, "series_t_max", "must be positive")


@dataclass
class AlphaConfig(TimeGrid):
    t_min: float = 1.0
    t_max: float = 60.0
    steps: int = 60
    omegas: list = field(default_factory=lambda: [0.1, 0.5, 0.9, 1.0])
    dissipator: str = "global"
    source: str = "expm"
    input: str = ""
    half_width: int = 0
    window_lo: float = math.nan
    window_hi: float = math.nan
    regime_tol: float = 0.05

    def validate(self) -> None:
        _require(self.source in ("expm", "closed_form", "csv"), "source", "must be 'expm', 'closed_form' or 'csv'")
        if self.source == "csv":
            _require(bool(self.input), "input", "is required when source = 'csv'")
        else:
            self._check_grid(need_positive=True)
            _require(len(self.omegas) > 0, "omegas", "must list at least one value")
            for w in self.omegas:
                _check_omega(w, "omegas")
        _require(self.dissipator in ("global", "local"), "dissipator", "must be 'global' or 'local'")
        if self.source == "closed_form":
            _require(self.dissipator == "global", "dissipator", "closed form exists only for 'global'")
        _require(self.half_width >= 0, "half_width", "must be non-negative (0 = automatic)")
        _require(self.regime_tol > 0, "regime_tol", "must be positive")
        if not (math.isnan(self.window_lo) or math.isnan(self.window_hi)):
            _require(self.window_hi > self.window_lo, "window_hi", "must exceed window_lo")


@dataclass
class PuritySweepConfig:
    n: int = 20
    l: int = 10
    t: float = 5.0
    omega_min: float = 0.0
    omega_max: float = 1.0
    omega_steps: int = 11
    dissipator: str = "global"
    method: str = "auto"
    svg: str = ""

    def validate(self) -> None:
        _require(self.n >= 1, "n", "must be a positive integer")
        _require(1 <= self.l <= self.n, "l", f"must be a vertex label in 1..{self.n}")
        _require(self.t >= 0, "t", "must be non-negative")
        _check_omega(self.omega_min, "omega_min")
        _check_omega(self.omega_max, "omega_max")
        _require(self.omega_max >= self.omega_min, "omega_max", "must be >= omega_min")
        _require(self.omega_steps >= 1, "omega_steps", "must be a positive integer")
        _require(self.dissipator in ("global", "local"), "dissipator", "must be 'global' or 'local'")
        _require(self.method in ("auto", "dense", "sparse", "spectral"), "method", "unknown method")
        if self.method == "spectral":
            _require(self.dissipator == "global", "method", "spectral propagation needs the global dissipator")


COMMANDS = {
    "evolve": EvolveConfig,
    "analytic": AnalyticConfig,
    "alpha": AlphaConfig,
    "purity-sweep": PuritySweepConfig,
}


def _require(cond: bool, key: str, message: str) -> None:
    if not cond:
        raise ConfigError(key, message)


def _check_omega(value, key: str) -> None:
    _require(0.0 <= value <= 1.0, key, f"must lie in [0, 1], got {value}")


def _coerce(key: str, value, default):
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        if ok:
            value = float(value)
    elif isinstance(default, str):
        ok = isinstance(value, str)
    elif isinstance(default, list):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = [value]
        ok = isinstance(value, list) and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        )
        if ok:
            value = [float(v) for v in value]
    else:
        ok = True
    if not ok:
        raise ConfigError(key, f"expected {type(default).__name__}, got {value!r}")
    if isinstance(value, float) and math.isinf(value):
        raise ConfigError(key, "must be finite")
    return value


def parse_override(item: str) -> tuple[str, object]:
    """``key=value`` with a TOML value; bare words are taken as strings."""
    if "=" not in item:
        raise ConfigError(item, "override must look like key=value")
    key, raw = item.split("=", 1)
    key, raw = key.strip(), raw.strip()
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return key, value


def load_config(command: str, path: str | Path | None = None, overrides=()) -> object:
    cls = COMMANDS[command]
    values: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                values.update(tomllib.load(fh))
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError("config", f"malformed TOML in {path}: {exc}") from exc
    for item in overrides:
        key, value = parse_override(item)
        values[key] = value

    defaults = cls()
    known = {f.name for f in fields(cls)}
    kwargs = {}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(key, f"unknown key for '{command}' (valid: {', '.join(sorted(known))})")
        if isinstance(value, dict):
            raise ConfigError(key, "nested tables are not supported; use flat keys")
        kwargs[key] = _coerce(key, value, getattr(defaults, key))
    cfg = cls(**kwargs)
    cfg.validate()
    return cfg
