"""Ground states on the periodic Cartesian grid used by the time steppers.

The discrete operator is the one applied by the Schroedinger-Poisson split
step: spectral kinetic term and ``phi = lap^-1`` of the projected,
zero-mean density. A state returned here is therefore stationary for that
stepper up to the splitting error.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..dynamics.grid import Grid, SpectralToolbox
from .radial import EigenResult, RadialProfile

__all__ = ["imaginary_time_ground", "sp_potential", "sp_operator", "radial_average"]


def sp_potential(tb: SpectralToolbox, psi):
    """Potential slaved to ``|psi|^2`` with the stepper's projection and gauge."""
    s = tb.fft(np.abs(psi) ** 2) * tb.mask
    s.flat[0] = 0.0
    inv = np.zeros_like(tb.k2)
    nz = tb.k2 > 0
    inv[nz] = -1.0 / tb.k2[nz]
    return tb.ifft(inv * s).real


def sp_operator(tb: SpectralToolbox, psi, phi=None):
    """``-1/2 lap psi + phi psi``."""
    if phi is None:
        phi = sp_potential(tb, psi)
    return tb.ifft(0.5 * tb.k2 * tb.fft(psi)) + phi * psi


def radial_average(grid: Grid, f, bins: Optional[int] = None):
    """Shell average of ``f`` around the origin: returns ``(r, mean)``."""
    r = grid.radius
    bins = bins or grid.n // 2
    edges = np.linspace(0.0, grid.box_length / 2, bins + 1)
    idx = np.digitize(r.ravel(), edges) - 1
    ok = (idx >= 0) & (idx < bins)
    tot = np.bincount(idx[ok], weights=np.asarray(f).ravel()[ok], minlength=bins)
    cnt = np.bincount(idx[ok], minlength=bins)
    centres = 0.5 * (edges[1:] + edges[:-1])
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = tot / cnt
    keep = cnt > 0
    return centres[keep], mean[keep]


def imaginary_time_ground(grid: Optional[Grid] = None, tol: float = 1e-10, *, norm: float = 1.0,
                          width: float = 1.0, dt: float = 0.5, max_iter: int = 50000,
                          dealias: bool = True) -> EigenResult:
    """Ground state by a preconditioned normalised gradient flow.

    Each iteration moves along ``-(c - 1/2 lap)^-1 (H psi - lambda psi)`` with
    ``lambda`` the Rayleigh quotient, then restores ``int |psi|^2 = norm``.
    Fixed points are exact eigenstates of the discrete operator.

    Parameters
    ----------
    grid : Grid
        Periodic grid; the state is centred at the origin.
    tol : float
        Stop once the relative eigen-residual falls below this.
    norm : float
        Mass of the state.

    Returns
    -------
    EigenResult
        ``profile`` is the shell average of the state around the origin;
        ``extra["psi"]`` holds the full real array.
    """
    grid = grid or Grid()
    tb = SpectralToolbox(grid, dealias=dealias)
    psi = np.exp(-grid.radius ** 2 / (2 * width * width))

    def renorm(f):
        return f * np.sqrt(norm / grid.norm2(f))

    psi = renorm(psi)
    residual = np.inf
    lam = 0.0
    for it in range(max_iter):
        phi = sp_potential(tb, psi)
        hpsi = sp_operator(tb, psi, phi).real
        lam = grid.integrate(psi * hpsi) / grid.integrate(psi * psi)
        grad = hpsi - lam * psi
        residual = float(np.max(np.abs(grad)) / np.max(np.abs(lam * psi)))
        if residual < tol:
            break
        shift = max(abs(lam), 1e-12) + float(np.max(phi) - np.min(phi))
        step = tb.ifft(tb.fft(grad) / (shift + 0.5 * tb.k2)).real
        psi = renorm(psi - dt * step)
    r, chi = radial_average(grid, psi)
    prof = RadialProfile(r, chi, radial_average(grid, phi)[1])
    mu = float(np.sqrt(-2.0 * lam)) if lam < 0 else float("nan")
    return EigenResult(
        omega=float(lam), mu=mu, nodes=0, residual=residual, profile=prof,
        method="imaginary-time-cartesian",
        extra={"psi": psi, "phi": phi, "iterations": it + 1, "grid": grid, "norm": norm},
    )
