"""Mass, Hamiltonians and initial data."""

from __future__ import annotations

import numpy as np

from .grid import Grid, SpectralToolbox
from .state import FieldState

__all__ = [
    "mass",
    "grad_sq",
    "kgw_energy",
    "sw_energy",
    "sp_energy",
    "nf2_energy",
    "hamiltonian",
    "gaussian_state",
]


def mass(state: FieldState, grid: Grid) -> float:
    """``int |Psi|^2`` (equal to ``int |psi|^2`` and to h)."""
    c = state.to_complex()
    return grid.norm2(c.psi)


def grad_sq(f, tb: SpectralToolbox) -> float:
    """``int |grad f|^2`` by Parseval."""
    g = tb.grid
    fh = np.fft.fftn(f)
    return float(np.sum(tb.k2 * np.abs(fh) ** 2) * g.cell_volume / f.size)


def _zm(f):
    return f - f.mean()


def kgw_energy(state: FieldState, tb: SpectralToolbox, epsilon: float) -> float:
    """``H_eps`` in the tau frame (zero-mean phi in the coupling)."""
    s = state.to_real()
    g = tb.grid
    quad = g.integrate(s.p_u ** 2 + s.u ** 2 + s.p_phi ** 2) / 2
    pert = (grad_sq(s.u, tb) + grad_sq(s.phi, tb)) / 2 + g.integrate(_zm(s.phi) * s.u ** 2)
    return float(quad + epsilon * pert)


def sw_energy(state: FieldState, tb: SpectralToolbox, epsilon: float) -> float:
    """``int p^2/(2 eps) + Z1`` in frame T: the Hamiltonian of the SW flow in T."""
    s = state.to_frame("T")
    g = tb.grid
    val = g.integrate(s.p_phi ** 2) / (2 * epsilon)
    val += (grad_sq(s.psi, tb) + grad_sq(s.phi, tb)) / 2
    val += g.integrate(_zm(s.phi) * np.abs(s.psi) ** 2)
    return float(np.real(val))


def _z2(psi, phi, p, tb):
    g = tb.grid
    psi_hat = np.fft.fftn(psi)
    lap = np.fft.ifftn(-tb.k2 * psi_hat)
    phi = _zm(phi)
    cross = np.conj(psi) * lap
    rho = np.abs(psi) ** 2
    dens = (-np.abs(lap) ** 2 / 8 + phi * cross.real / 2 - p * cross.imag / 8
            - phi ** 2 * rho / 2 + rho ** 2 / 16)
    return float(np.real(g.integrate(dens)))


def nf2_energy(state: FieldState, tb: SpectralToolbox, epsilon: float) -> float:
    """``int p^2/(2 eps) + Z1 + eps Z2`` in frame T."""
    s = state.to_frame("T")
    return sw_energy(s, tb, epsilon) + epsilon * _z2(s.psi, s.phi, s.p_phi, tb)


def sp_energy(state: FieldState, tb: SpectralToolbox) -> float:
    """``int |grad Psi|^2/2 + phi |Psi|^2 / 2`` with phi the zero-mean Poisson solution."""
    psi = state.psi
    g = tb.grid
    rho = np.abs(psi) ** 2
    phi = tb.inverse_laplacian_zero_mean(rho)
    return float(grad_sq(psi, tb) / 2 + np.real(g.integrate(phi * rho)) / 2)


def hamiltonian(system: str, state: FieldState, tb: SpectralToolbox, epsilon: float) -> float:
    """Conserved energy of ``system`` (for KGW_complex, the tau-frame ``H_eps``)."""
    if system in ("KGW", "KGW_complex"):
        return kgw_energy(state, tb, epsilon)
    if system == "SW":
        return sw_energy(state, tb, epsilon)
    if system == "NF2":
        return nf2_energy(state, tb, epsilon)
    if system == "SP":
        return sp_energy(state, tb)
    raise ValueError(f"unknown system {system!r}")


def gaussian_state(grid: Grid, sigma: float = 1.0, center=0.0, norm: float = 1.0,
                   epsilon: float | None = None, velocity: float = 0.0) -> FieldState:
    """Real-form data ``u = A exp(-|x-c|^2 / 2 sigma^2)``, ``p_u = phi = p_phi = 0``.

    ``A`` is fixed by ``int u^2 = norm``. A nonzero ``velocity`` multiplies
    the complex field by ``exp(i v x_0)`` before splitting into ``(u, p_u)``.
    """
    centers = np.broadcast_to(np.asarray(center, float), (grid.dim,))
    r2 = sum((x - c) ** 2 for x, c in zip(grid.coords, centers))
    u = np.exp(-r2 / (2 * sigma ** 2))
    psi = u / np.sqrt(2.0)
    if velocity:
        psi = psi * np.exp(1j * velocity * grid.coords[0])
    scale = np.sqrt(norm / grid.norm2(np.sqrt(2.0) * psi))
    psi = psi * scale
    zeros = np.zeros(grid.shape)
    return FieldState.real(np.sqrt(2.0) * psi.real, np.sqrt(2.0) * psi.imag, zeros, zeros.copy(),
                           0.0, epsilon)
