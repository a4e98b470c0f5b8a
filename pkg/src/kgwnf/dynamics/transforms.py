"""Numerical flow of the first-order generating Hamiltonian G1.

Hamilton's equations of

    G1 = int [ i/8 ((grad psi)^2 - (grad psiStar)^2) + i/4 phi (psi^2 - psiStar^2)
               + 1/8 pphi (psi^2 + psiStar^2) ]

with ``{psi, psiStar} = -i`` and ``{phi, pphi} = 1`` read

    dpsi/ds  = lap(psiStar)/4 - phi psiStar/2 - i pphi psiStar/4
    dphi/ds  = Re(psi^2)/4
    dpphi/ds = Im(psi^2)/2

G1 carries charge +-2, so it acts on the ungauged psi of the tau frame.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid
from .state import FieldState
from .systems import _toolbox

__all__ = ["g1_flow_map", "g1_rhs"]


def g1_rhs(psi, phi, p, tb, mask=None):
    """Right-hand side of the G1 flow; fields in physical space, psi in frame tau."""
    cpsi = np.conj(psi)
    phi0 = phi - phi.mean()
    p0 = p - p.mean()
    lap_c = tb.laplacian(cpsi)
    dpsi = lap_c / 4 - phi0 * cpsi / 2 - 0.25j * p0 * cpsi
    sq = psi * psi
    dphi = sq.real / 4
    dp = sq.imag / 2
    dphi = dphi - dphi.mean()
    dp = dp - dp.mean()
    if mask is not None:
        dpsi = np.fft.ifftn(np.fft.fftn(dpsi) * mask)
        dphi = np.fft.ifftn(np.fft.fftn(dphi) * mask).real
        dp = np.fft.ifftn(np.fft.fftn(dp) * mask).real
    return dpsi, dphi, dp


def g1_flow_map(state: FieldState, epsilon: float, direction: int = 1, grid: Grid | None = None,
                substeps: int = 64, dealias: bool = True) -> FieldState:
    """Flow of G1 for pseudo-time ``direction * epsilon`` (rk4 substeps).

    The result has the same form and frame as ``state``.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if grid is None:
        raise ValueError(f"grid is required (field shape {state.phi.shape})")
    if epsilon == 0:
        return state.copy()
    tb = _toolbox(grid, dealias)
    mask = tb.mask if dealias else None
    tau_state = state.to_frame("tau") if state.epsilon else state.to_complex()
    psi, phi, p = tau_state.psi.copy(), tau_state.phi.copy(), tau_state.p_phi.copy()
    h = direction * epsilon / substeps
    for _ in range(substeps):
        k1 = g1_rhs(psi, phi, p, tb, mask)
        k2 = g1_rhs(*(a + h / 2 * b for a, b in zip((psi, phi, p), k1)), tb, mask)
        k3 = g1_rhs(*(a + h / 2 * b for a, b in zip((psi, phi, p), k2)), tb, mask)
        k4 = g1_rhs(*(a + h * b for a, b in zip((psi, phi, p), k3)), tb, mask)
        psi, phi, p = (a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
                       for a, b1, b2, b3, b4 in zip((psi, phi, p), k1, k2, k3, k4))
    out = FieldState.complex(psi, phi, p, tau_state.time, "tau", tau_state.epsilon)
    if state.form == "real":
        return out.to_real()
    return out.to_frame(state.frame) if state.epsilon else out
