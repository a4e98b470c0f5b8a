"""Execution of experiment configurations.

Each ``(epsilon, system)`` run writes into its own directory; the sweep
summary and manifest are written by the parent once all runs are back.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .. import __version__
from ..dynamics import (FieldState, Grid, SolverConfig, SolverFailure, Trajectory,
                        compare_trajectories, default_dt, g1_flow_map, gaussian_state, integrate,
                        read_snapshot, well_prepared_state, write_diagnostics_csv, write_snapshot)
from ..stationary import imaginary_time_ground
from .config import ExperimentConfig
from .svg import line_plot

__all__ = ["RunFailure", "ExperimentResult", "initial_state", "run_system", "run_experiment",
           "fit_slope"]


class RunFailure(RuntimeError):
    """A solver failed; ``run_id`` names the run, ``step`` the failing step."""

    def __init__(self, run_id: str, message: str, step: Optional[int] = None):
        super().__init__(f"{run_id}: {message}")
        self.run_id = run_id
        self.step = step
        self.detail = message

    def record(self) -> dict:
        return {"error": "solver-failure", "run": self.run_id, "message": self.detail,
                "step": self.step}


@dataclass
class ExperimentResult:
    directory: Path
    manifest: dict
    errors: Dict[str, Dict[float, float]]
    slopes: Dict[str, float]


def fit_slope(eps, err) -> float:
    """Least-squares slope of ``log err`` against ``log eps``."""
    x, y = np.log(np.asarray(eps, float)), np.log(np.asarray(err, float))
    return float(np.polyfit(x, y, 1)[0])


def _grid(cfg: ExperimentConfig) -> Grid:
    return Grid(cfg.grid["dim"], cfg.grid["n"], cfg.grid["box_length"])


def _rescale(psi, grid: Grid, scale: float):
    """``scale^(d/2) psi(scale x)`` by linear interpolation (mass preserved)."""
    from scipy.interpolate import RegularGridInterpolator

    if scale == 1.0:
        return psi
    pts = np.stack([c.ravel() * scale for c in grid.coords], axis=-1)
    out = np.zeros(pts.shape[0], dtype=complex)
    for part, unit in ((psi.real, 1.0), (psi.imag, 1j)):
        f = RegularGridInterpolator(grid.axes, part, bounds_error=False, fill_value=0.0)
        out = out + unit * f(pts)
    return scale ** (grid.dim / 2) * out.reshape(grid.shape)


def initial_state(cfg: ExperimentConfig, epsilon: float) -> FieldState:
    """Initial data for one epsilon, described by ``cfg.initial``."""
    grid = _grid(cfg)
    ini = cfg.initial
    kind = ini["kind"]
    if kind == "snapshot":
        state, _ = read_snapshot(ini["path"])
        if state.phi.shape != grid.shape:
            raise ValueError(f"snapshot shape {state.phi.shape} does not match grid {grid.shape}")
        state.epsilon = epsilon
        return state
    prepare = int(ini.get("prepare", 1))
    if kind == "gaussian":
        s = gaussian_state(grid, sigma=float(ini.get("sigma", 1.0)), center=ini.get("center", 0.0),
                           norm=float(ini.get("norm", 1.0)), epsilon=epsilon,
                           velocity=float(ini.get("velocity", 0.0)))
        if prepare == 0:
            return s
        psi = s.massive("T")
    else:
        gs = imaginary_time_ground(grid, float(ini.get("tol", 1e-12)), norm=float(ini.get("norm", 1.0)))
        psi = gs.extra["psi"].astype(complex)
        psi = _rescale(psi, grid, float(ini.get("scale", 1.0)))
        boost = float(ini.get("boost", 0.0))
        if boost:
            psi = psi * np.exp(1j * boost * grid.coords[0])
        if prepare == 0:
            zeros = np.zeros(grid.shape)
            return FieldState.complex(psi, zeros, zeros.copy(), 0.0, "T", epsilon)
    return well_prepared_state(psi, grid, epsilon, order=prepare)


def run_system(system: str, state0: FieldState, epsilon: float, cfg: ExperimentConfig,
               keep_states: bool = True) -> Trajectory:
    """Integrate one system to ``cfg.t_end`` (slow time), sampling every
    ``cfg.sample_interval``. States are returned in original coordinates
    even when a near-identity transform is applied."""
    grid = _grid(cfg)
    native = 1.0 / epsilon if system == "KGW" else 1.0
    sample = cfg.sample_interval * native
    dt_max = cfg.dt.get(system) or default_dt(epsilon, grid) * (native if system == "KGW" else 1.0)
    per = max(1, math.ceil(sample / dt_max - 1e-9))
    dt = sample / per
    n_samples = int(round(cfg.t_end / cfg.sample_interval))
    scfg = SolverConfig(system, epsilon, dt, t_end=dt * per * n_samples,
                        scheme=cfg.scheme.get(system, ""),
                        diagnostics_period=cfg.diagnostics_period, grid=grid)
    transform = cfg.transform.get(system, "none")
    start = state0
    if transform == "g1":
        start = g1_flow_map(state0.to_frame("T"), epsilon, -1, grid)
    traj = integrate(start, scfg, sample_every=per, keep_states=keep_states or transform != "none")
    if transform == "g1":
        traj.states = [g1_flow_map(s, epsilon, 1, grid) for s in traj.states]
    return traj


def _eps_tag(eps: float) -> str:
    return f"eps{eps:.6g}"


def _run_one_epsilon(cfg: ExperimentConfig, epsilon: float, out: str) -> dict:
    """All systems for one epsilon; returns per-system error series."""
    root = Path(out) / _eps_tag(epsilon)
    root.mkdir(parents=True, exist_ok=True)
    grid = _grid(cfg)
    state0 = initial_state(cfg, epsilon)
    trajs: Dict[str, Trajectory] = {}
    for system in cfg.systems:
        run_id = f"{system}/{_eps_tag(epsilon)}"
        try:
            trajs[system] = run_system(system, state0, epsilon, cfg)
        except SolverFailure as exc:
            return {"epsilon": epsilon, "failure": RunFailure(run_id, str(exc), exc.step).record(),
                    "errors": {}}
        tr = trajs[system]
        if cfg.diagnostics_period:
            write_diagnostics_csv(root / f"diagnostics_{system}.csv", tr)
        if cfg.snapshots == "final":
            write_snapshot(root / f"final_{system}.nfld", tr.states[-1], grid)
        elif cfg.snapshots == "samples":
            for i, s in enumerate(tr.states):
                write_snapshot(root / f"{system}_{i:05d}.nfld", s, grid)
    result = {"epsilon": epsilon, "errors": {}, "failure": None}
    if cfg.mode == "simulate" or len(cfg.systems) < 2:
        return result
    ref = trajs[cfg.systems[0]]
    times = ref.times_T()
    with open(root / "errors.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        others = cfg.systems[1:]
        w.writerow(["time"] + [f"{s}_vs_{cfg.systems[0]}" for s in others])
        series = {s: compare_trajectories(trajs[s], ref, cfg.norm) for s in others}
        for i, t in enumerate(times):
            w.writerow([repr(float(t))] + [repr(float(series[s][i])) for s in others])
    for s, e in series.items():
        result["errors"][s] = {"sup": float(np.max(e)), "final": float(e[-1])}
    return result


def run_experiment(cfg: ExperimentConfig, out: Optional[str] = None, workers: int = 1) -> ExperimentResult:
    """Execute ``cfg``; outputs go to ``out/<name>``."""
    base = Path(out or cfg.output_dir or "runs") / cfg.name
    base.mkdir(parents=True, exist_ok=True)
    (base / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
    t0 = time.time()
    eps_list = list(cfg.epsilons)
    if workers > 1 and len(eps_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one_epsilon, [cfg] * len(eps_list), eps_list,
                                    [str(base)] * len(eps_list)))
    else:
        results = [_run_one_epsilon(cfg, e, str(base)) for e in eps_list]
    failures = [r["failure"] for r in results if r["failure"]]
    errors: Dict[str, Dict[float, float]] = {}
    for r in results:
        for s, v in r["errors"].items():
            errors.setdefault(s, {})[r["epsilon"]] = v["sup"]
    slopes = {}
    if cfg.mode == "sweep":
        with open(base / "sweep.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["config_hash", cfg.digest()])
            w.writerow(["epsilon", "system", "sup_error", "final_error"])
            for r in results:
                for s, v in r["errors"].items():
                    w.writerow([repr(r["epsilon"]), s, repr(v["sup"]), repr(v["final"])])
        for s, d in errors.items():
            if len(d) >= 2:
                e = sorted(d)
                slopes[s] = fit_slope(e, [d[k] for k in e])
        if cfg.plots and errors:
            series = {f"{s} (slope {slopes.get(s, float('nan')):.2f})": (sorted(d), [d[k] for k in sorted(d)])
                      for s, d in errors.items()}
            line_plot(base / "sweep.svg", series, title=f"{cfg.name}: error vs epsilon",
                      xlabel="epsilon", ylabel=f"sup error ({cfg.norm})", loglog=True)
    manifest = {
        "schema_version": cfg.schema_version,
        "config_hash": cfg.digest(),
        "name": cfg.name,
        "mode": cfg.mode,
        "versions": {"kgwnf": __version__, "numpy": np.__version__, "python": platform.python_version()},
        "wall_time_s": round(time.time() - t0, 3),
        "reference": cfg.systems[0],
        "errors": {s: {repr(k): v for k, v in d.items()} for s, d in errors.items()},
        "slopes": slopes,
        "status": "failed" if failures else "ok",
        "failures": failures,
    }
    (base / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if failures:
        f = failures[0]
        raise RunFailure(f["run"], f["message"], f["step"])
    return ExperimentResult(base, manifest, errors, slopes)
