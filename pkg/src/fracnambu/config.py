"""Strict JSON run configuration.

Unknown keys are errors (a silently ignored physics parameter is worse
than a loud one), every message names the offending key path, and all
defaults are applied here so the rest of the tool sees fully resolved
values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .cantor import CantorSpec
from .systems import SYSTEM_NAMES

__all__ = ["ConfigError", "RunConfig", "parse_config"]

_COMMANDS = ("dimension", "staircase", "simulate", "check")
_TIME_KINDS = ("exact-staircase", "power-law", "classical")

_TOP_KEYS = {
    "command",
    "set",
    "alpha",
    "system",
    "time",
    "grid",
    "integrator",
    "seeds",
    "output",
    "x0",
    "depth",
    "paper_faithful",
    "max_depth",
    "tol",
    "figures",
}


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending key."""


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected an object")
    return value


def _reject_unknown(mapping: dict, allowed: set, path: str) -> None:
    for key in mapping:
        if key not in allowed:
            prefix = f"{path}." if path else ""
            raise ConfigError(f"{prefix}{key}: unknown key")


def _number(mapping: dict, key: str, path: str, default):
    if key not in mapping:
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number")
    return float(value)


def _integer(mapping: dict, key: str, path: str, default):
    if key not in mapping:
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer")
    return int(value)


def _boolean(mapping: dict, key: str, path: str, default: bool) -> bool:
    if key not in mapping:
        return default
    value = mapping[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected true or false")
    return value


def _string(mapping: dict, key: str, path: str, default):
    if key not in mapping:
        return default
    value = mapping[key]
    if not isinstance(value, str):
        raise ConfigError(f"{path}.{key}: expected a string")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration."""

    command: str
    cantor: CantorSpec
    depth: int
    alphas: tuple
    system_name: str | None
    system_parameters: dict
    paper_faithful: bool
    time_kind: str
    t_min: float
    t_max: float
    samples: int
    step: float
    s_max: float | None
    x0: tuple | None
    seeds: tuple
    out_path: str | None
    out_format: str
    figures: bool
    max_depth: int
    tol: float

    def with_overrides(
        self,
        out_path: str | None = None,
        depth: int | None = None,
        seed: int | None = None,
        paper_faithful: bool = False,
    ) -> "RunConfig":
        cfg = self
        if out_path is not None:
            cfg = replace(cfg, out_path=out_path)
        if depth is not None:
            if depth < 0:
                raise ConfigError("depth: must be non-negative")
            cfg = replace(cfg, depth=depth)
        if seed is not None:
            cfg = replace(cfg, seeds=(int(seed),))
        if paper_faithful:
            cfg = replace(cfg, paper_faithful=True)
        return cfg

    def settings_dict(self) -> dict:
        """Everything that affected the numbers, for the run manifest.

        Deliberately excludes output paths so reruns into different
        directories produce identical manifests.
        """
        return {
            "command": self.command,
            "set": {
                "c1": self.cantor.c1,
                "c2": self.cantor.c2,
                "epsilon": self.cantor.epsilon,
                "c0": self.cantor.anchor,
            },
            "depth": self.depth,
            "alpha": list(self.alphas),
            "system": {"name": self.system_name, "parameters": dict(self.system_parameters)},
            "paper_faithful": self.paper_faithful,
            "time": {"kind": self.time_kind},
            "grid": {"t_min": self.t_min, "t_max": self.t_max, "samples": self.samples},
            "integrator": {"step": self.step, "s_max": self.s_max},
            "x0": None if self.x0 is None else list(self.x0),
            "seeds": list(self.seeds),
            "figures": self.figures,
            "max_depth": self.max_depth,
            "tol": self.tol,
            "format": self.out_format,
        }


def _parse_alphas(raw) -> tuple:
    if raw is None:
        return (1.0,)
    values = raw if isinstance(raw, list) else [raw]
    if not values:
        raise ConfigError("alpha: list must be non-empty")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError("alpha: expected a number or list of numbers")
        v = float(v)
        if not 0.0 < v <= 1.0:
            raise ConfigError("alpha: alpha must lie in (0,1]")
        out.append(v)
    return tuple(out)


def _parse_set(section) -> CantorSpec:
    section = _require_mapping(section, "set")
    _reject_unknown(section, {"c1", "c2", "epsilon", "c0"}, "set")
    c1 = _number(section, "c1", "set", 0.0)
    c2 = _number(section, "c2", "set", 1.0)
    epsilon = _number(section, "epsilon", "set", 1.0 / 3.0)
    c0 = _number(section, "c0", "set", None)
    try:
        return CantorSpec(c1=c1, c2=c2, epsilon=epsilon, c0=c0)
    except ValueError as exc:
        raise ConfigError(f"set: {exc}") from exc


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    raw = _require_mapping(raw, "config")
    _reject_unknown(raw, _TOP_KEYS, "")

    if "command" not in raw:
        raise ConfigError("command: missing required key")
    command = raw["command"]
    if command not in _COMMANDS:
        raise ConfigError(f"command: must be one of {', '.join(_COMMANDS)}")

    cantor = _parse_set(raw.get("set", {}))
    alphas = _parse_alphas(raw.get("alpha"))

    system_name = None
    system_parameters: dict = {}
    if "system" in raw:
        section = _require_mapping(raw["system"], "system")
        _reject_unknown(section, {"name", "parameters"}, "system")
        system_name = _string(section, "name", "system", None)
        if system_name is not None and system_name not in SYSTEM_NAMES:
            raise ConfigError(
                f"system.name: unknown system {system_name!r}; "
                f"known systems: {', '.join(SYSTEM_NAMES)}"
            )
        params = _require_mapping(section.get("parameters", {}), "system.parameters")
        for key, value in params.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"system.parameters.{key}: expected a number")
            system_parameters[key] = float(value)
    if command == "simulate" and system_name is None:
        raise ConfigError("system.name: missing required key")

    time_section = _require_mapping(raw.get("time", {}), "time")
    _reject_unknown(time_section, {"kind"}, "time")
    time_kind = _string(time_section, "kind", "time", "power-law")
    if time_kind not in _TIME_KINDS:
        raise ConfigError(f"time.kind: must be one of {', '.join(_TIME_KINDS)}")

    grid = _require_mapping(raw.get("grid", {}), "grid")
    _reject_unknown(grid, {"t_min", "t_max", "samples"}, "grid")
    t_min = _number(grid, "t_min", "grid", 0.0)
    t_max = _number(grid, "t_max", "grid", 1.0)
    samples = _integer(grid, "samples", "grid", 501)
    if not t_max > t_min:
        raise ConfigError("grid.t_max: must exceed grid.t_min")
    if samples < 2:
        raise ConfigError("grid.samples: must be at least 2")

    integrator = _require_mapping(raw.get("integrator", {}), "integrator")
    _reject_unknown(integrator, {"step", "s_max"}, "integrator")
    step = _number(integrator, "step", "integrator", 1e-3)
    s_max = _number(integrator, "s_max", "integrator", None)
    if not step > 0.0:
        raise ConfigError("integrator.step: must be positive")
    if s_max is not None and not s_max > 0.0:
        raise ConfigError("integrator.s_max: must be positive")

    x0 = None
    if "x0" in raw:
        value = raw["x0"]
        if not isinstance(value, list) or len(value) < 2:
            raise ConfigError("x0: expected a list of at least 2 numbers")
        coords = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError("x0: expected a list of numbers")
            coords.append(float(v))
        x0 = tuple(coords)

    seeds: tuple = (1234,)
    if "seeds" in raw:
        value = raw["seeds"]
        if not isinstance(value, list) or not value:
            raise ConfigError("seeds: expected a non-empty list of integers")
        collected = []
        for v in value:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError("seeds: expected a non-empty list of integers")
            collected.append(int(v))
        seeds = tuple(collected)

    output = _require_mapping(raw.get("output", {}), "output")
    _reject_unknown(output, {"path", "format"}, "output")
    out_path = _string(output, "path", "output", None)
    out_format = _string(output, "format", "output", "csv")
    if out_format != "csv":
        raise ConfigError("output.format: only 'csv' is supported")

    depth = _integer(raw, "depth", "config", 20)
    if depth < 0:
        raise ConfigError("depth: must be non-negative")
    max_depth = _integer(raw, "max_depth", "config", 16)
    if max_depth < 4:
        raise ConfigError("max_depth: must be at least 4")
    tol = _number(raw, "tol", "config", 1e-3)
    if not tol > 0.0:
        raise ConfigError("tol: must be positive")
    paper_faithful = _boolean(raw, "paper_faithful", "config", False)
    figures = _boolean(raw, "figures", "config", True)

    if command == "simulate":
        if t_min < 0.0:
            raise ConfigError("grid.t_min: must be non-negative")
        if time_kind == "classical" and any(a != 1.0 for a in alphas):
            raise ConfigError("alpha: classical mode fixes alpha = 1")
        if time_kind == "exact-staircase" and (cantor.c1 > t_min or cantor.c2 < t_max):
            raise ConfigError(
                "time.kind: exact-staircase requires the set interval [c1, c2] "
                "to cover [t_min, t_max]"
            )

    return RunConfig(
        command=command,
        cantor=cantor,
        depth=depth,
        alphas=alphas,
        system_name=system_name,
        system_parameters=system_parameters,
        paper_faithful=paper_faithful,
        time_kind=time_kind,
        t_min=t_min,
        t_max=t_max,
        samples=samples,
        step=step,
        s_max=s_max,
        x0=x0,
        seeds=seeds,
        out_path=out_path,
        out_format=out_format,
        figures=figures,
        max_depth=max_depth,
        tol=tol,
    )
