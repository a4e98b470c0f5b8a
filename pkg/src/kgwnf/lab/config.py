"""Experiment configuration files (YAML) and their validation.

Example::

    schema_version: 1
    name: kgw-vs-sw
    mode: sweep                 # simulate | compare | sweep
    systems: [KGW, SW]          # the first system is the reference
    epsilons: [0.04, 0.02, 0.01, 0.005]
    grid: {dim: 1, n: 256, box_length: 32.0}
    initial: {kind: gaussian, sigma: 1.0, norm: 1.0, prepare: 1}
    t_end: 1.0                  # slow time T
    sample_interval: 0.001      # slow time between stored samples
    dt: {KGW: 0.02, SW: 0.001}  # largest step, native time of each system
    scheme: {KGW: yoshida4, SW: yoshida4}
    transform: {}               # e.g. {NF2: g1}
    norm: L2_state
    diagnostics_period: 0
    snapshots: final            # none | final | samples
    plots: true

Unknown keys are rejected at every level.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import yaml

from ..dynamics.grid import Grid
from ..dynamics.systems import SCHEMES, SYSTEMS

__all__ = ["SCHEMA_VERSION", "ConfigError", "ExperimentConfig", "load_config", "parse_config"]

SCHEMA_VERSION = 1
MODES = ("simulate", "compare", "sweep")
INITIAL_KINDS = ("gaussian", "ground_state", "snapshot")
NORMS = ("L2_state", "L2_full", "mass_gap")
TRANSFORMS = ("none", "g1")

_TOP = {
    "schema_version", "name", "mode", "systems", "epsilons", "grid", "initial", "t_end",
    "sample_interval", "dt", "scheme", "transform", "norm", "diagnostics_period", "snapshots",
    "plots", "output_dir",
}
_GRID = {"dim", "n", "box_length"}
_INITIAL = {
    "gaussian": {"kind", "sigma", "norm", "center", "velocity", "prepare"},
    "ground_state": {"kind", "boost", "scale", "norm", "prepare", "tol"},
    "snapshot": {"kind", "path"},
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    name: str
    mode: str
    systems: List[str]
    epsilons: List[float]
    grid: Dict[str, float] = field(default_factory=lambda: {"dim": 1, "n": 256, "box_length": 32.0})
    initial: Dict[str, object] = field(default_factory=lambda: {"kind": "gaussian"})
    t_end: float = 1.0
    sample_interval: float = 0.01
    dt: Dict[str, float] = field(default_factory=dict)
    scheme: Dict[str, str] = field(default_factory=dict)
    transform: Dict[str, str] = field(default_factory=dict)
    norm: str = "L2_state"
    diagnostics_period: int = 0
    snapshots: str = "final"
    plots: bool = True
    output_dir: Optional[str] = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form (output location excluded)."""
        d = self.to_dict()
        d.pop("output_dir", None)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


def _unknown(keys, allowed, where):
    extra = sorted(set(keys) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _positive(x, what):
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a number, got {x!r}") from None
    if not v > 0:
        raise ConfigError(f"{what} must be positive, got {x!r}")
    return v


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a parsed document and build an :class:`ExperimentConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    _unknown(data, _TOP, "configuration")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
    mode = data.get("mode", "sweep")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    systems = data.get("systems")
    if not systems or not isinstance(systems, list):
        raise ConfigError("systems must be a non-empty list")
    for s in systems:
        if s not in SYSTEMS:
            raise ConfigError(f"unknown system {s!r}; choose from {SYSTEMS}")
    if len(set(systems)) != len(systems):
        raise ConfigError("systems must not repeat")
    if mode in ("compare", "sweep") and len(systems) < 2:
        raise ConfigError(f"mode {mode!r} needs at least two systems")
    eps = data.get("epsilons")
    if not eps or not isinstance(eps, list):
        raise ConfigError("epsilons must be a non-empty list")
    eps = [_positive(e, "epsilon") for e in eps]

    grid = dict(data.get("grid") or {})
    _unknown(grid, _GRID, "grid")
    grid = {"dim": int(grid.get("dim", 1)), "n": int(grid.get("n", 256)),
            "box_length": _positive(grid.get("box_length", 32.0), "grid.box_length")}
    try:
        Grid(grid["dim"], grid["n"], grid["box_length"])
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None

    initial = dict(data.get("initial") or {"kind": "gaussian"})
    kind = initial.get("kind")
    if kind not in INITIAL_KINDS:
        raise ConfigError(f"initial.kind must be one of {INITIAL_KINDS}, got {kind!r}")
    _unknown(initial, _INITIAL[kind], f"initial ({kind})")
    if kind == "snapshot" and "path" not in initial:
        raise ConfigError("initial.path is required for snapshot data")
    if "prepare" in initial and initial["prepare"] not in (0, 1, 2):
        raise ConfigError("initial.prepare must be 0, 1 or 2")

    def per_system(key, cast):
        raw = data.get(key) or {}
        if not isinstance(raw, dict):
            raise ConfigError(f"{key} must map system names to values")
        _unknown(raw, systems, key)
        return {k: cast(v, f"{key}.{k}") for k, v in raw.items()}

    dt = per_system("dt", _positive)

    def scheme_cast(v, what):
        sysname = what.split(".", 1)[1]
        if v not in SCHEMES[sysname]:
            raise ConfigError(f"{what} must be one of {SCHEMES[sysname]}, got {v!r}")
        return v

    def transform_cast(v, what):
        if v not in TRANSFORMS:
            raise ConfigError(f"{what} must be one of {TRANSFORMS}, got {v!r}")
        return v

    scheme = per_system("scheme", scheme_cast)
    transform = per_system("transform", transform_cast)
    norm = data.get("norm", "L2_state")
    if norm not in NORMS:
        raise ConfigError(f"norm must be one of {NORMS}, got {norm!r}")
    snapshots = data.get("snapshots", "final")
    if snapshots not in ("none", "final", "samples"):
        raise ConfigError("snapshots must be none, final or samples")
    period = data.get("diagnostics_period", 0)
    if not isinstance(period, int) or period < 0:
        raise ConfigError("diagnostics_period must be a non-negative integer")
    t_end = _positive(data.get("t_end", 1.0), "t_end")
    sample = _positive(data.get("sample_interval", 0.01), "sample_interval")
    if sample > t_end:
        raise ConfigError("sample_interval exceeds t_end")
    n_samples = t_end / sample
    if abs(n_samples - round(n_samples)) > 1e-9 * n_samples:
        raise ConfigError("t_end must be a whole number of sample intervals")
    return ExperimentConfig(
        name=str(data.get("name", "experiment")), mode=mode, systems=list(systems), epsilons=eps,
        grid=grid, initial=initial, t_end=t_end, sample_interval=sample, dt=dt, scheme=scheme,
        transform=transform, norm=norm, diagnostics_period=period, snapshots=snapshots,
        plots=bool(data.get("plots", True)), output_dir=data.get("output_dir"),
    )


def load_config(path) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return parse_config(data)
