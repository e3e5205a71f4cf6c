"""Python front end for the dbesim simulator core."""

from __future__ import annotations

import json
import os
from typing import Any, Mapping, Union

from . import _core
from ._core import (
    ConfigError,
    InfeasibleError,
    IoError,
    RangeError,
    decode_order,
    geometry,
    golden_rgb,
    rgb_from_ycocg,
    ycocg_from_rgb,
)

ConfigLike = Union[str, "os.PathLike[str]", Mapping[str, Any]]

__all__ = [
    "ConfigError",
    "InfeasibleError",
    "IoError",
    "RangeError",
    "accounting",
    "decode_order",
    "explore",
    "fps",
    "geometry",
    "golden_rgb",
    "load_config",
    "rgb_from_ycocg",
    "simulate",
    "ycocg_from_rgb",
]


def _config_text(config: ConfigLike) -> str:
    """Accept a mapping, a JSON string, or a path to a JSON file."""
    if isinstance(config, Mapping):
        return json.dumps(dict(config))
    text = os.fspath(config)
    if text.lstrip().startswith("{"):
        return text
    try:
        with open(text, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read config '{text}': {exc}") from exc


def load_config(config: ConfigLike) -> dict:
    """Validated config with all defaults filled in."""
    return json.loads(_core.normalize_config(_config_text(config)))


def simulate(config: ConfigLike, trace: bool = False) -> dict:
    """Run one simulation. With ``trace`` the CSV access trace is under ``"trace_csv"``."""
    report, csv = _core.simulate(_config_text(config), trace)
    out = json.loads(report)
    if csv:
        out["trace_csv"] = csv
    return out


def accounting(config: ConfigLike) -> dict:
    return _core.accounting(_config_text(config))


def explore(arch: Union[str, Mapping[str, Any]] = "Type2",
            window: Mapping[str, Any] | None = None) -> dict:
    """Minimal resident set for an arch budget (preset name or arch object)."""
    # The probe image is built internally; this one only satisfies config validation.
    cfg: dict = {"image": {"width": 64, "height": 2}, "arch": arch}
    if window is not None:
        cfg["window_spec"] = dict(window)
    return _core.explore(json.dumps(cfg))


def fps(width: int, height: int, mhz: float = 200.0, ppc: int = 4) -> tuple[float, float]:
    return _core.fps(width, height, mhz, ppc)
