"""Flat key=value configuration files with CLI overrides.

Format: one ``key = value`` pair per line, ``#`` starts a comment,
no nesting.  Unknown keys are rejected with the offending line number.
Precedence is flag > file > default.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .evolve import InitialDataSpec, SimulationConfig
from .grid import GridSpec
from .rhs import QuadratureConfig


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "on", "yes", "1"):
        return True
    if low in ("false", "off", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(p) for p in raw.split(",") if p.strip())


def _parse_ints(raw: str) -> tuple[int, ...]:
    return tuple(int(p) for p in raw.split(",") if p.strip())


#: key -> (parser, default)
SCHEMA = {
    "grid.d": (int, 1),
    "grid.n": (int, 256),
    "grid.length": (float, 2.0 * np.pi),
    "t_end": (float, 10.0),
    "cfl": (float, 0.4),
    "record_every": (int, 1),
    "dealias": (_parse_bool, True),
    "linear_only": (_parse_bool, False),
    "monitor_mode": (str, "strict"),
    "s_list": (_parse_floats, (1.0, 2.0)),
    "nu_list": (_parse_floats, None),
    "sobolev_orders": (_parse_floats, (2.0,)),
    "initial.kind": (str, "single-mode"),
    "initial.target": (float, 0.1),
    "initial.band": (_parse_ints, (1, 1)),
    "initial.exponent": (float, 1.0),
    "initial.seed": (int, 0),
    "quad.image_count": (int, 3),
    "quad.max_n": (int, 500),
    "quad.delta": (float, 0.01),
}


def default_values() -> dict:
    return {key: default for key, (_, default) in SCHEMA.items()}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse config file text into a typed dict; errors carry line numbers."""
    values: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in SCHEMA:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        parser, _ = SCHEMA[key]
        try:
            values[key] = parser(raw_value)
        except (ValueError, TypeError) as err:
            raise ConfigurationError(f"{source}:{lineno}: bad value for {key}: {err}") from None
    return values


def load_config(path) -> dict:
    with open(path) as fh:
        return parse_config_text(fh.read(), source=str(path))


def apply_overrides(values: dict, pairs: list[str]) -> dict:
    """Apply repeatable ``--set key=value`` overrides on top of file values."""
    out = dict(values)
    for pair in pairs:
        if "=" not in pair:
            raise ConfigurationError(f"override must look like key=value, got {pair!r}")
        key, _, raw_value = pair.partition("=")
        key = key.strip()
        if key not in SCHEMA:
            raise ConfigurationError(f"override references unknown key {key!r}")
        parser, _ = SCHEMA[key]
        try:
            out[key] = parser(raw_value.strip())
        except (ValueError, TypeError) as err:
            raise ConfigurationError(f"bad override value for {key}: {err}") from None
    return out


def build_simulation_config(values: dict) -> SimulationConfig:
    """Assemble a validated SimulationConfig from a flat value dict."""
    merged = default_values()
    merged.update(values)
    grid = GridSpec(d=merged["grid.d"], n=merged["grid.n"], length=merged["grid.length"])
    initial = InitialDataSpec(
        kind=merged["initial.kind"],
        target=merged["initial.target"],
        band=tuple(merged["initial.band"]),
        exponent=merged["initial.exponent"],
        seed=merged["initial.seed"],
    )
    quad = QuadratureConfig(
        image_count=merged["quad.image_count"],
        max_n=merged["quad.max_n"],
        delta=merged["quad.delta"],
    )
    nu_list = merged["nu_list"]
    return SimulationConfig(
        grid=grid,
        t_end=merged["t_end"],
        cfl=merged["cfl"],
        record_every=merged["record_every"],
        s_list=tuple(merged["s_list"]),
        nu_list=tuple(nu_list) if nu_list is not None else None,
        sobolev_orders=tuple(merged["sobolev_orders"]),
        dealias=merged["dealias"],
        initial=initial,
        quad=quad,
        linear_only=merged["linear_only"],
        monitor_mode=merged["monitor_mode"],
    )
