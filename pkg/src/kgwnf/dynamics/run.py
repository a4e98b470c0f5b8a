"""Time integration with sampling, diagnostics and trajectory comparison."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np

from .grid import Grid, SpectralToolbox
from .observables import hamiltonian, mass
from .state import FieldState, FrameError
from .systems import SolverConfig, _toolbox, make_stepper

__all__ = [
    "ConfigurationError",
    "DiagnosticsRecord",
    "Trajectory",
    "integrate",
    "write_diagnostics_csv",
    "compare_trajectories",
    "sup_error",
    "well_prepared_state",
    "DIAGNOSTIC_COLUMNS",
]

DIAGNOSTIC_COLUMNS = ("step", "time", "mass", "hamiltonian", "error_vs_ref")


class ConfigurationError(ValueError):
    """Inputs that cannot be reconciled (grids, sample times, frames)."""


@dataclass
class DiagnosticsRecord:
    step: int
    time: float
    mass: float
    hamiltonian: float
    error_vs_ref: float = math.nan

    def row(self):
        return [self.step, repr(self.time), repr(self.mass), repr(self.hamiltonian),
                repr(self.error_vs_ref)]


@dataclass
class Trajectory:
    """Sampled run of one system.

    ``states[i]`` is the state at ``times[i]`` (native time of the system).
    """

    cfg: SolverConfig
    times: List[float] = field(default_factory=list)
    states: List[FieldState] = field(default_factory=list)
    diagnostics: List[DiagnosticsRecord] = field(default_factory=list)

    @property
    def system(self) -> str:
        return self.cfg.system

    def times_T(self) -> np.ndarray:
        """Sample times in the slow time T."""
        t = np.asarray(self.times, dtype=float)
        return t * self.cfg.epsilon if self.cfg.frame == "tau" else t


def _check_finite(state: FieldState, step: int):
    from .systems import SolverFailure

    for a in state.arrays():
        if not np.all(np.isfinite(a)):
            raise SolverFailure("non-finite field in diagnostics", step)


def integrate(state: FieldState, cfg: SolverConfig, sample_every: Optional[int] = None,
              reference: Optional[Callable[[FieldState, int], float]] = None,
              keep_states: bool = True) -> Trajectory:
    """Advance ``state`` for ``cfg.n_steps`` steps.

    Parameters
    ----------
    sample_every : int, optional
        Store the state every this many steps (default: start and end only).
    reference : callable, optional
        ``reference(state, step)`` returning an error value for the
        diagnostics column ``error_vs_ref``.

    Diagnostics are recorded every ``cfg.diagnostics_period`` steps when
    that is positive, and at every stored sample.
    """
    stepper = make_stepper(cfg)
    tb = _toolbox(cfg.grid, cfg.dealias)
    eps = cfg.epsilon
    n_total = cfg.n_steps
    stride_s = sample_every or n_total
    stride_d = cfg.diagnostics_period
    marks = set(range(0, n_total + 1, stride_s)) | {n_total}
    if stride_d > 0:
        marks |= set(range(0, n_total + 1, stride_d))
    marks = sorted(marks)
    traj = Trajectory(cfg)
    cur = state
    done = 0
    for mark in marks:
        if mark > done:
            cur = stepper.advance(cur, mark - done)
            done = mark
        sampled = mark % stride_s == 0 or mark == n_total
        if sampled:
            if keep_states:
                traj.states.append(cur)
            traj.times.append(cur.time)
        if stride_d > 0 and (sampled or mark % stride_d == 0):
            _check_finite(cur, mark)
            err = reference(cur, mark) if reference is not None else math.nan
            traj.diagnostics.append(DiagnosticsRecord(
                mark, float(cur.time), mass(cur, cfg.grid),
                float(hamiltonian(cfg.system, cur, tb, eps)), float(err)))
    return traj


def write_diagnostics_csv(path, traj: Trajectory) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DIAGNOSTIC_COLUMNS)
        for rec in traj.diagnostics:
            w.writerow(rec.row())
    return path


def _in_T(state: FieldState) -> FieldState:
    try:
        return state.to_frame("T")
    except FrameError as exc:
        raise ConfigurationError(f"cannot bring state to frame T: {exc}") from exc


def compare_trajectories(a: Trajectory, b: Trajectory, norm: str = "L2_state",
                         observable: Optional[Callable[[FieldState, Grid], float]] = None,
                         atol_time: float = 1e-9) -> np.ndarray:
    """Error between two runs at their common sample times.

    Both runs are brought to frame T in complex form first, so real-pair tau
    runs compare directly with gauged T runs.

    Parameters
    ----------
    norm : {"L2_state", "L2_full", "mass_gap", "observable"}
        ``L2_state`` is ``||Psi_a - Psi_b|| / ||Psi_b||``; ``L2_full`` also
        includes ``phi``; ``mass_gap`` is the absolute mass difference;
        ``observable`` is ``|obs(a) - obs(b)|`` for the given callable.
    """
    if a.cfg.grid != b.cfg.grid:
        raise ConfigurationError("trajectories live on different grids")
    ta, tb_ = a.times_T(), b.times_T()
    if len(ta) != len(tb_) or np.any(np.abs(ta - tb_) > atol_time * np.maximum(1.0, np.abs(ta))):
        raise ConfigurationError("sample times do not match")
    if len(a.states) != len(ta) or len(b.states) != len(tb_):
        raise ConfigurationError("trajectories were run without keeping states")
    grid = a.cfg.grid
    out = np.empty(len(ta))
    for i, (sa, sb) in enumerate(zip(a.states, b.states)):
        if norm == "observable":
            if observable is None:
                raise ConfigurationError("norm='observable' needs an observable callable")
            out[i] = abs(observable(sa, grid) - observable(sb, grid))
            continue
        ca, cb = _in_T(sa), _in_T(sb)
        if norm == "L2_state":
            out[i] = np.sqrt(grid.norm2(ca.psi - cb.psi) / grid.norm2(cb.psi))
        elif norm == "L2_full":
            num = grid.norm2(ca.psi - cb.psi) + grid.norm2(ca.phi - cb.phi)
            den = grid.norm2(cb.psi) + grid.norm2(cb.phi)
            out[i] = np.sqrt(num / den)
        elif norm == "mass_gap":
            out[i] = abs(grid.norm2(ca.psi) - grid.norm2(cb.psi))
        else:
            raise ConfigurationError(f"unknown norm {norm!r}")
    return out


def sup_error(a: Trajectory, b: Trajectory, norm: str = "L2_state") -> float:
    """Largest sampled error between two runs."""
    return float(np.max(compare_trajectories(a, b, norm)))


def _density_derivatives(psi, grid: Grid, h: float, substeps: int = 8):
    """``rho`` and its first three T-derivatives along the SP flow.

    Central differences over ``+-h, +-2h``; the backward values come from
    the time reversal ``Psi(-T) = conj(Psi~(T))`` where ``Psi~`` starts at
    ``conj(Psi)``.
    """
    from .systems import step_sp

    cfg = SolverConfig("SP", 0.0, h / substeps, h, "yoshida4", grid=grid)
    rho = {0: np.abs(psi) ** 2}
    for sign, start in ((1, psi), (-1, np.conj(psi))):
        cur = FieldState.complex(start, np.zeros(grid.shape), np.zeros(grid.shape), 0.0, "T", None)
        for j in (1, 2):
            cur = step_sp(cur, cfg, substeps)
            rho[sign * j] = np.abs(cur.psi) ** 2
    d1 = (rho[1] - rho[-1]) / (2 * h)
    d2 = (rho[1] - 2 * rho[0] + rho[-1]) / h ** 2
    d3 = (rho[2] - 2 * rho[1] + 2 * rho[-1] - rho[-2]) / (2 * h ** 3)
    return rho[0], d1, d2, d3


def well_prepared_state(psi_T, grid: Grid, epsilon: Optional[float], time: float = 0.0,
                        dealias: bool = True, order: int = 1, h: float = 1e-3) -> FieldState:
    """Frame-T state with ``phi`` slaved to the density.

    With ``order=1``, ``phi = lap^-1 rho`` (zero mean, ``rho = |Psi|^2``)
    and ``p_phi = eps * dphi/dT`` from the continuity equation
    ``rho_T = -div J``, ``J = Im(conj(Psi) grad Psi)``. This removes the
    order-one free radiation that unprepared data (``phi = p_phi = 0``)
    would emit, but leaves a free wave of order ``eps``.

    With ``order=2`` the next term of the slow expansion of
    ``eps phi_TT = lap phi - rho`` is added:
    ``phi = lap^-1 rho + eps lap^-2 rho_TT`` and
    ``p_phi = eps lap^-1 rho_T + eps^2 lap^-2 rho_TTT``, the density
    derivatives taken along the SP flow with step ``h``. The remaining
    free wave is then of order ``eps^2``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    tb = SpectralToolbox(grid, dealias=dealias)
    psi = np.asarray(psi_T, dtype=complex)
    inv = tb.inverse_laplacian_zero_mean

    def solve(f):
        return np.real(inv(tb.dealias(f)))

    if order == 1:
        rho = np.abs(psi) ** 2
        phi = solve(rho)
        if epsilon:
            grads = tb.gradient(psi)
            div = sum(tb.derivative(np.imag(np.conj(psi) * g), axis=a) for a, g in enumerate(grads))
            p = epsilon * solve(-div)
        else:
            p = np.zeros_like(phi)
    else:
        rho, d1, d2, d3 = _density_derivatives(psi, grid, h)
        eps = epsilon or 0.0
        phi = solve(rho) + eps * solve(solve(d2))
        p = eps * solve(d1) + eps * eps * solve(solve(d3))
    return FieldState.complex(psi, phi, p, time, "T", epsilon)
