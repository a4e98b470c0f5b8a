"""Profile export: CSV tables and Cartesian snapshots for solver start-up."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

import numpy as np

from ..dynamics.grid import Grid
from ..dynamics.snapshot import write_snapshot
from ..dynamics.state import FieldState
from .radial import EigenResult, RadialProfile

__all__ = ["write_profile_csv", "read_profile_csv", "profile_on_grid", "write_profile_snapshot"]


def write_profile_csv(path, result: EigenResult) -> Path:
    path = Path(path)
    p = result.profile
    with open(path, "w", newline="") as fh:
        fh.write(f"# omega={result.omega!r} mu={result.mu!r} nodes={result.nodes} "
                 f"residual={result.residual!r}\n")
        w = csv.writer(fh)
        w.writerow(["r", "chi", "phi"])
        for row in zip(p.r, p.chi, p.phi):
            w.writerow([repr(float(x)) for x in row])
    return path


def read_profile_csv(path) -> RadialProfile:
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=2)
    return RadialProfile(data[:, 0], data[:, 1], data[:, 2])


def profile_on_grid(result: EigenResult, grid: Grid, scale: float = 1.0):
    """``(chi, phi)`` sampled on a 3D grid, after the scaling map with ``scale``.

    ``scale`` multiplies lengths by ``1/scale`` and amplitudes by ``scale^2``
    so a unit-norm profile can be fitted into a small box (the norm becomes
    ``scale``).
    """
    if grid.dim != 3:
        raise ValueError("radial profiles are three dimensional")
    p = result.profile
    r = grid.radius * scale
    chi = scale ** 2 * np.interp(r, p.r, p.chi, right=0.0)
    # far field of the potential beyond the tabulated range
    m = p.r[-1] * (-p.phi[-1])
    phi_tab = np.interp(r, p.r, p.phi)
    phi = scale ** 2 * np.where(r <= p.r[-1], phi_tab, -m / np.maximum(r, 1e-300))
    return chi, phi


def write_profile_snapshot(path, result: EigenResult, grid: Grid, scale: float = 1.0,
                           epsilon: Optional[float] = None) -> Path:
    """NFLD1 snapshot of the standing wave at ``T = 0`` in frame T."""
    chi, phi = profile_on_grid(result, grid, scale)
    state = FieldState.complex(chi.astype(complex), phi, np.zeros_like(phi), 0.0, "T", epsilon)
    return write_snapshot(path, state, grid)
