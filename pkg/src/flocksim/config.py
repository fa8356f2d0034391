"""Scenario configuration: line-oriented `key = value` files plus overrides.

Format: one `key = value` per line, `#` starts a comment, blank lines are
skipped, later assignments win. Unknown keys are rejected. Keys without a
default are required. Every key can also be supplied on the command line,
where it beats the file.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .state import ModelParams, Variant


class ConfigError(Exception):
    """Invalid configuration; the message names the key and source line."""


_INT_KEYS = {"n", "dim", "seed", "decimation"}
_FLOAT_KEYS = {"t_end", "dt", "radius", "delta", "k", "vmax", "umax",
               "box", "v_init_max"}
_STR_KEYS = {"model", "out"}
ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS

DEFAULTS = {"dim": 2, "dt": 0.05, "decimation": 1, "box": 25.0,
            "v_init_max": 1.0}
# `model` first so an empty document is reported as missing its selector
REQUIRED = ["model"] + sorted(ALL_KEYS - set(DEFAULTS) - {"model"})


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated inputs for one scenario run."""

    model: Variant
    n: int
    dim: int
    seed: int
    t_end: float
    dt: float
    radius: float
    delta: float
    k: float
    vmax: float
    umax: float
    box: float
    v_init_max: float
    decimation: int
    out: str

    def model_params(self, variant: Variant | None = None) -> ModelParams:
        return ModelParams(delta=self.delta, k=self.k, radius=self.radius,
                           v_max=self.vmax, u_max=self.umax,
                           variant=variant or self.model,
                           dt=self.dt, t_end=self.t_end)

    def echo(self) -> dict[str, str]:
        """Config as printable key/value pairs (model by its selector name)."""
        values = {key: getattr(self, key) for key in sorted(ALL_KEYS)}
        values["model"] = self.model.value
        return {key: str(value) for key, value in values.items()}


def _convert(key: str, raw: str, where: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError("non-finite")
            return value
        if key == "model":
            return Variant.parse(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = '{raw}' ({where}): {exc}") from None


def _validate(values: dict, origin: dict[str, str]) -> ScenarioConfig:
    def where(key: str) -> str:
        return origin.get(key, "default")

    rules = [
        ("n", values["n"] >= 2, "n must be >= 2"),
        ("dim", values["dim"] in (2, 3), "dim must be 2 or 3"),
        ("delta", values["delta"] >= 0.0, "delta must be >= 0"),
        ("k", values["k"] > 0.0, "k must be > 0"),
        ("radius", values["radius"] > 0.0, "radius must be > 0"),
        ("vmax", values["vmax"] > 0.0, "vmax must be > 0"),
        ("umax", values["umax"] > 0.0, "umax must be > 0"),
        ("dt", values["dt"] > 0.0, "dt must be > 0"),
        ("t_end", values["t_end"] >= values["dt"], "t_end must be >= dt"),
        ("box", values["box"] > 0.0, "box must be > 0"),
        ("v_init_max", values["v_init_max"] >= 0.0, "v_init_max must be >= 0"),
        ("decimation", values["decimation"] >= 1, "decimation must be >= 1"),
        ("out", bool(values["out"]), "out must be a non-empty path"),
    ]
    for key, ok, message in rules:
        if not ok:
            raise ConfigError(f"{message} ({where(key)})")
    return ScenarioConfig(**values)


def parse_config(text: str, overrides: dict[str, str] | None = None) -> ScenarioConfig:
    """Parse a config document, apply overrides, validate, or raise ConfigError."""
    values: dict = {}
    origin: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected 'key = value' (line {lineno}): '{content}'")
        key, raw = (part.strip() for part in content.split("=", 1))
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown key '{key}' (line {lineno})")
        values[key] = _convert(key, raw, f"line {lineno}")
        origin[key] = f"line {lineno}"
    for key, raw in (overrides or {}).items():
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown key '{key}' (command line)")
        values[key] = _convert(key, str(raw), "command line")
        origin[key] = "command line"
    for key, default in DEFAULTS.items():
        values.setdefault(key, default)
    missing = [key for key in REQUIRED if key not in values]
    if missing:
        raise ConfigError(f"required key `{missing[0]}` missing")
    return _validate(values, origin)
