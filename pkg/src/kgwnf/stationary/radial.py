"""Radial stationary states of the Schrodinger-Poisson system in three dimensions.

A stationary state ``Psi = exp(-i omega T) chi(r)`` with real ``chi`` solves

    -1/2 lap chi + phi chi = omega chi,    lap phi = chi^2,

with ``phi -> 0`` at infinity. Profiles returned here are normalised to
``int chi^2 d^3x = 1`` and ``mu = sqrt(-2 omega)``.

The shooting problem is solved at ``chi(0) = 1`` where the scales are of
order one, then mapped to unit norm with the exact scaling symmetry
``(chi, phi, omega, r) -> (a^2 chi, a^2 phi, a^2 omega, r / a)``, under
which the norm scales by ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson, simpson, solve_ivp

__all__ = [
    "RadialProfile",
    "EigenResult",
    "ShootingFailure",
    "shoot_radial",
    "imaginary_time_radial",
    "radial_potential",
    "radial_residual",
    "radial_norm",
    "rescale_profile",
]

_R0 = 1e-3
_RTOL = 1e-12
_ATOL = 1e-14


class ShootingFailure(RuntimeError):
    """The bisection could not bracket the requested node count."""


@dataclass
class RadialProfile:
    """Profile sampled on a uniform radial grid starting at ``r = 0``."""

    r: np.ndarray
    chi: np.ndarray
    phi: np.ndarray

    @property
    def dr(self) -> float:
        return float(self.r[1] - self.r[0])

    def norm(self) -> float:
        return radial_norm(self.r, self.chi)

    def __call__(self, radius):
        """Linear interpolation of ``chi``; zero outside the grid."""
        return np.interp(radius, self.r, self.chi, right=0.0)


@dataclass
class EigenResult:
    """Outcome of a stationary-state solve.

    Attributes
    ----------
    omega : float
        Eigenfrequency for the unit-norm state.
    mu : float
        ``sqrt(-2 omega)``.
    nodes : int
        Number of radial nodes of ``chi``.
    residual : float
        Max-norm of the eigen-equation on the output grid, relative to
        ``max |omega chi|``.
    profile : RadialProfile
        Unit-norm profile.
    method : str
    extra : dict
        Solver specific diagnostics.
    """

    omega: float
    mu: float
    nodes: int
    residual: float
    profile: RadialProfile
    method: str = "shooting"
    extra: dict = field(default_factory=dict)


def radial_norm(r, chi) -> float:
    return float(4.0 * np.pi * simpson(r * r * chi * chi, x=r))


def radial_potential(r, chi) -> np.ndarray:
    """Potential with ``lap phi = chi^2`` and ``phi(inf) = 0``.

    ``phi(r) = -(1/r) int_0^r s^2 chi^2 ds - int_r^inf s chi^2 ds``.
    """
    r = np.asarray(r, dtype=float)
    inner = cumulative_simpson(r * r * chi * chi, x=r, initial=0.0)
    outer_from0 = cumulative_simpson(r * chi * chi, x=r, initial=0.0)
    outer = outer_from0[-1] - outer_from0
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(r > 0, -inner / np.where(r > 0, r, 1.0), 0.0) - outer
    phi[0] = -outer[0]
    return phi


# sixth order central second derivative
_D2 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])


def _second_derivative_odd(v, h):
    """Second derivative of ``v`` (odd about ``r = 0``) on interior points."""
    ext = np.concatenate([-v[3:0:-1], v])
    n = len(v)
    out = np.full(n, np.nan)
    for i in range(0, n - 3):
        out[i] = _D2 @ ext[i : i + 7]
    return out / (h * h)


def radial_residual(profile: RadialProfile, omega: float) -> float:
    """Relative max-norm of ``-1/2 lap chi + phi chi - omega chi``.

    The Laplacian uses ``lap chi = (r chi)'' / r`` with a sixth order stencil;
    the last three points (where the profile is below the tail cut) are skipped.
    """
    r, chi, phi = profile.r, profile.chi, profile.phi
    v = r * chi
    d2 = _second_derivative_odd(v, profile.dr)
    sel = slice(1, len(r) - 3)
    res = -0.5 * d2[sel] / r[sel] + (phi[sel] - omega) * chi[sel]
    scale = np.max(np.abs(omega * chi))
    return float(np.max(np.abs(res)) / scale)


def rescale_profile(profile: RadialProfile, omega: float, factor: float):
    """Apply the scaling symmetry with parameter ``factor``."""
    a2 = factor * factor
    out = RadialProfile(profile.r / factor, a2 * profile.chi, a2 * profile.phi)
    return out, a2 * omega


# ---------------------------------------------------------------------------
# shooting


def _rhs(r, y, e):
    chi, dchi, phi, dphi = y
    return [dchi, 2.0 * (phi - e) * chi - 2.0 * dchi / r, dphi, chi * chi - 2.0 * dphi / r]


def _start(e):
    r = _R0
    return [1.0 - e * r * r / 3.0, -2.0 * e * r / 3.0, r * r / 6.0, r / 3.0]


def _node_event(r, y, e):
    return y[0]


def _blow_event(r, y, e):
    return abs(y[0]) - 2.0


_blow_event.terminal = True


def _shoot(e, r_limit, max_nodes=None):
    events = [_node_event, _blow_event]
    sol = solve_ivp(
        _rhs, (_R0, r_limit), _start(e), args=(e,), method="DOP853",
        rtol=_RTOL, atol=_ATOL, events=events, dense_output=True,
    )
    return len(sol.t_events[0]), sol


def _bracket(nodes, r_limit, e_max=50.0):
    """Energies ``(lo, hi)`` with ``N(lo) <= nodes < N(hi)``."""
    lo, step = 0.0, 0.1
    hi = lo + step
    while True:
        n, _ = _shoot(hi, r_limit)
        if n > nodes:
            return lo, hi
        lo, hi = hi, hi + step
        if hi > e_max:
            raise ShootingFailure(f"no energy with more than {nodes} nodes below {e_max}")


def _match_radius(sol_lo, sol_hi, r_top, agree=1e-9):
    """Largest radius up to which the bracketing trajectories agree.

    Past this point the growing solution contaminates the shooting profile,
    so the decaying tail is attached there.
    """
    grid = np.linspace(_R0, r_top, 20001)
    a = sol_lo.sol(grid)[0]
    b = sol_hi.sol(grid)[0]
    ok = np.abs(a - b) <= agree * np.abs(0.5 * (a + b))
    bad = np.nonzero(~ok)[0]
    stop = bad[0] if len(bad) else len(grid)
    return float(grid[max(stop - 1, 0)])


def _tail(r_match, v_match, kappa, m, r_far):
    """Decaying solution of ``v'' = (kappa^2 - 2 m / r) v`` integrated inward."""
    def rhs(r, y):
        return [y[1], (kappa * kappa - 2.0 * m / r) * y[0]]

    sol = solve_ivp(rhs, (r_far, r_match), [1e-200, -kappa * 1e-200], method="DOP853",
                    rtol=_RTOL, atol=1e-300, dense_output=True)
    scale = v_match / sol.y[0, -1]
    return sol, scale


def shoot_radial(nodes: int = 0, tol: float = 1e-8, *, dr: Optional[float] = None,
                 r_limit: float = 400.0, tail: float = 1e-10, max_iter: int = 200) -> EigenResult:
    """Stationary state with ``nodes`` radial nodes by bisection shooting.

    Parameters
    ----------
    nodes : int
        Requested node count ``j``.
    tol : float
        Bound on the relative eigen-residual; a larger residual raises
        :class:`ShootingFailure`. The bisection itself always runs to
        floating point resolution.
    dr : float, optional
        Output grid spacing in the ``chi(0) = 1`` units (default 0.01).
    tail : float
        The output grid extends until ``|chi| / chi(0)`` drops below this.

    Returns
    -------
    EigenResult
        Unit-norm state. ``extra`` holds the shooting energy, the matching
        radius and the unnormalised mass.
    """
    if nodes < 0:
        raise ValueError("nodes must be non-negative")
    dr = 0.01 if dr is None else dr
    lo, hi = _bracket(nodes, r_limit)
    it = 0
    while it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        n, _ = _shoot(mid, r_limit)
        if n > nodes:
            hi = mid
        else:
            lo = mid
        it += 1
    _, sol_lo = _shoot(lo, r_limit)
    _, sol_hi = _shoot(hi, r_limit)
    r_top = min(sol_lo.t[-1], sol_hi.t[-1])
    r_match = _match_radius(sol_lo, sol_hi, r_top)
    e = 0.5 * (lo + hi)

    y_match = 0.5 * (sol_lo.sol(r_match) + sol_hi.sol(r_match))
    chi_m, _, phi_m, dphi_m = y_match
    m = dphi_m * r_match * r_match  # int_0^r s^2 chi^2 ds
    phi_inf = phi_m + m / r_match
    kappa2 = 2.0 * (phi_inf - e)
    if kappa2 <= 0:
        raise ShootingFailure("shooting energy above the potential at infinity")
    kappa = np.sqrt(kappa2)
    # decay of v ~ exp(-kappa r) r^(m/kappa): choose the far edge well past the cut
    r_far = r_match + (np.log(abs(chi_m) / tail) + 10.0) / kappa + 10.0 * m / kappa2
    tail_sol, scale = _tail(r_match, r_match * chi_m, kappa, m, r_far)

    r = np.arange(0.0, r_far + dr, dr)
    inner = r <= r_match
    rr = np.maximum(r[inner], _R0)
    y_in = 0.5 * (sol_lo.sol(rr) + sol_hi.sol(rr))
    near = r[inner] < _R0
    y_in[0, near] = 1.0 - e * r[inner][near] ** 2 / 3.0
    y_in[2, near] = r[inner][near] ** 2 / 6.0
    ro = r[~inner]
    chi = np.concatenate([y_in[0], scale * tail_sol.sol(ro)[0] / ro])
    # potential from the shooting solution; the mass beyond r_match is negligible
    phi = np.concatenate([y_in[2] - phi_inf, -m / ro])
    above = np.nonzero(np.abs(chi) > tail * abs(chi[0]))[0]
    cut = min(len(r), above[-1] + 8)
    r, chi, phi = r[:cut], chi[:cut], phi[:cut]

    omega_u = e - phi_inf
    prof = RadialProfile(r, chi, phi)
    mass = prof.norm()
    scaled, omega = rescale_profile(prof, omega_u, 1.0 / mass)
    residual = radial_residual(scaled, omega)
    if residual > tol:
        raise ShootingFailure(f"eigen-residual {residual:.3e} exceeds tol {tol:.1e}")
    n_nodes = int(np.count_nonzero(np.diff(np.sign(chi[np.abs(chi) > 1e-8 * abs(chi[0])])) != 0))
    return EigenResult(
        omega=float(omega), mu=float(np.sqrt(-2.0 * omega)), nodes=n_nodes, residual=residual,
        profile=scaled, method="shooting",
        extra={"shooting_energy": e, "omega_unit_center": omega_u, "mass_unit_center": mass,
               "r_match": r_match, "iterations": it},
    )


# ---------------------------------------------------------------------------
# imaginary time oracle


def _d2_banded(n, h):
    """Fourth order Dirichlet second difference for odd data at ``r = 0``.

    Unknowns are ``v(h), ..., v(n h)`` with ``v(0) = v((n+1) h) = 0`` and odd
    reflection at both ends.
    """
    c = np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]) / (h * h)
    ab = np.zeros((5, n))
    for k, off in enumerate((2, 1, 0, -1, -2)):
        ab[k, :] = c[2 - off] if off else c[2]
    # odd reflection: v(-h) = -v(h) adds -c[0] to the first diagonal entry
    ab[2, 0] += -c[0]
    ab[2, -1] += -c[0]
    return ab


def _apply_banded(ab, v):
    n = len(v)
    out = ab[2] * v
    out[:-1] += ab[1, 1:] * v[1:]
    out[:-2] += ab[0, 2:] * v[2:]
    out[1:] += ab[3, :-1] * v[:-1]
    out[2:] += ab[4, :-2] * v[:-2]
    return out


def imaginary_time_radial(norm: float = 20.0, *, r_max: float = 30.0, dr: float = 0.01,
                          dt: float = 0.5, tol: float = 1e-12, max_iter: int = 20000,
                          sigma: float = 2.0) -> EigenResult:
    """Ground state by normalised backward-Euler imaginary time on a radial grid.

    An independent route to the lowest eigenvalue: fourth order finite
    differences for ``(r chi)''`` and a quadrature Poisson solve, iterated as
    ``(1 + dt (H[phi] - s)) v_new = v`` followed by renormalisation, with the
    shift ``s`` kept below the spectrum. The result is mapped to unit norm
    with the scaling symmetry, so ``norm`` only sets the working scale; it
    must be large enough for the state to decay well inside ``r_max``.
    """
    from scipy.linalg import solve_banded

    n = int(round(r_max / dr)) - 1
    r = dr * np.arange(1, n + 1)
    rfull = np.concatenate([[0.0], r, [r[-1] + dr]])
    D2 = _d2_banded(n, dr)
    chi = np.exp(-r * r / (2 * sigma * sigma))
    v = r * chi

    def potential(v):
        c = np.concatenate([[v[0] / dr], v / r, [0.0]])
        return radial_potential(rfull, c)[1:-1]

    def renorm(v):
        c = np.concatenate([[v[0] / dr], v / r, [0.0]])
        return v * np.sqrt(norm / radial_norm(rfull, c))

    v = renorm(v)
    omega = 0.0
    change = np.inf
    for it in range(max_iter):
        phi = potential(v)
        shift = float(np.min(phi)) - 1.0
        ab = -0.5 * dt * D2
        ab[2] += 1.0 + dt * (phi - shift)
        v_new = renorm(solve_banded((2, 2), ab, v))
        change = float(np.max(np.abs(v_new - v)) / np.max(np.abs(v_new)))
        v = v_new
        if change < tol:
            break
    phi = potential(v)
    hv = -0.5 * _apply_banded(D2, v) + phi * v
    omega = float(np.dot(v, hv) / np.dot(v, v))
    res = np.max(np.abs(hv - omega * v)) / np.max(np.abs(omega * v))
    chi = np.concatenate([[v[0] / dr], v / r, [0.0]])
    chi[0] = (4 * chi[1] - chi[2]) / 3.0
    prof = RadialProfile(rfull, chi, radial_potential(rfull, chi))
    scaled, omega_n = rescale_profile(prof, omega, 1.0 / norm)
    scaled.phi = radial_potential(scaled.r, scaled.chi)
    return EigenResult(
        omega=float(omega_n), mu=float(np.sqrt(-2.0 * omega_n)), nodes=0, residual=float(res),
        profile=scaled, method="imaginary-time-radial",
        extra={"iterations": it + 1, "last_change": change, "omega_working": omega},
    )
