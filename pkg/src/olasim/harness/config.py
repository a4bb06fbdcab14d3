"""Experiment configuration: defaults, preset resolution, validation, and a
content fingerprint that ties output files to the exact settings that
produced them.

A configuration is a nested JSON-compatible dict. ``resolve`` deep-merges, in
order: package defaults, then the named preset (if any), then the user's
overrides. Unknown sections or keys are rejected rather than ignored.
"""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path
from typing import Any

from ..errors import ConfigurationError

LEARNER_KINDS = ("ola", "cal", "a2", "dhm", "cbgz")

DEFAULTS: dict[str, Any] = {
    "hypothesis": {"kind": "threshold1d", "resolution": None, "dim": None},
    "stream": {"distribution": "uniform_cube", "bayes_params": [0.5]},
    "noise": {"kind": "massart_flip", "eta_high": 0.75, "eta_low": None},
    "learner": {"kind": "ola"},
    "horizon": {"T": 10000, "unknown": False},
    "ola": {"m": 16},
    "threshold": {"scale": 0.15, "beta_squared_radicals": False},
    "cbgz": {"b": 1.0},
    "analysis": {
        "n_mc": 100000,
        "phi_mc": 2000,
        "r_grid": [2.0**k for k in range(-10, 1)],
    },
    "seeds": 20,
    "grid_points": 50,
}


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"config file not found: {p}")
    try:
        with open(p) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {p} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"config file {p} must hold a JSON object")
    return cfg


def resolve(user: dict[str, Any] | None = None, preset: str | None = None) -> dict[str, Any]:
    """Merge defaults <- preset <- user overrides and validate the result."""
    from .presets import PRESETS

    user = {} if user is None else copy.deepcopy(user)
    name = user.pop("preset", None) if preset is None else preset
    cfg = copy.deepcopy(DEFAULTS)
    if name is not None:
        if name not in PRESETS:
            raise ConfigurationError(
                f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
            )
        _deep_merge(cfg, PRESETS[name])
    _deep_merge(cfg, user, validate_against=DEFAULTS)
    _validate(cfg)
    return cfg


def _deep_merge(base: dict, extra: dict, validate_against: dict | None = None) -> None:
    for key, value in extra.items():
        if validate_against is not None and key not in validate_against:
            raise ConfigurationError(f"unknown config key {key!r}")
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_merge(
                base[key],
                value,
                validate_against=None if validate_against is None else validate_against[key],
            )
        else:
            base[key] = copy.deepcopy(value)


def _validate(cfg: dict[str, Any]) -> None:
    kinds = cfg["learner"]["kind"]
    if isinstance(kinds, str):
        kinds = [kinds]
    if not kinds or not all(k in LEARNER_KINDS for k in kinds):
        raise ConfigurationError(
            f"learner.kind must name learners among {LEARNER_KINDS}, got {kinds!r}"
        )
    T = cfg["horizon"]["T"]
    if not isinstance(T, int) or T < 1:
        raise ConfigurationError(f"horizon.T must be a positive integer, got {T!r}")
    seeds = cfg["seeds"]
    if isinstance(seeds, int):
        if seeds < 1:
            raise ConfigurationError(f"seeds count must be >= 1, got {seeds}")
    elif isinstance(seeds, list):
        if not seeds or not all(isinstance(s, int) for s in seeds):
            raise ConfigurationError("seeds list must hold integers")
        if len(set(seeds)) != len(seeds):
            raise ConfigurationError("seeds list holds duplicates")
    else:
        raise ConfigurationError("seeds must be an integer count or a list of integers")
    if cfg["noise"]["kind"] not in ("massart_flip", "linear_sphere"):
        raise ConfigurationError(f"unknown noise kind {cfg['noise']['kind']!r}")
    if cfg["stream"]["distribution"] not in ("uniform_cube", "uniform_sphere"):
        raise ConfigurationError(
            f"unknown distribution {cfg['stream']['distribution']!r}"
        )


def seed_list(cfg: dict[str, Any]) -> list[int]:
    """Explicit list of run seeds; an integer count n means seeds 1..n."""
    seeds = cfg["seeds"]
    if isinstance(seeds, int):
        return list(range(1, seeds + 1))
    return list(seeds)


def learner_kinds(cfg: dict[str, Any]) -> list[str]:
    kinds = cfg["learner"]["kind"]
    return [kinds] if isinstance(kinds, str) else list(kinds)


def fingerprint(cfg: dict[str, Any]) -> str:
    """Stable 16-hex-digit digest of a resolved configuration."""
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def get_path(cfg: dict[str, Any], dotted: str) -> Any:
    node: Any = cfg
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            raise ConfigurationError(f"config has no key {dotted!r}")
        node = node[part]
    return node


def set_path(cfg: dict[str, Any], dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    node = cfg
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            raise ConfigurationError(f"config has no section {part!r} in {dotted!r}")
        node = node[part]
    if parts[-1] not in node:
        raise ConfigurationError(f"config has no key {dotted!r}")
    node[parts[-1]] = value
