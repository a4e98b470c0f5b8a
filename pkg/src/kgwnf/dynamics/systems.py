"""Time steppers for the Klein-Gordon-Wave family on a periodic grid.

All steppers work on Fourier coefficients internally. Wave sources drop their
k = 0 component (zero-mean convention), and the coupling uses the zero-mean
part of phi, so the mean of phi is a decoupled free mode. With dealiasing on,
every nonlinear force is projected on the 2/3 band; the unitary phase steps
of the Schroedinger-type splittings are left unprojected so that the mass is
conserved to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .grid import Grid, SpectralToolbox
from .state import FieldState, FrameError

__all__ = [
    "SolverConfig",
    "SolverFailure",
    "SYSTEMS",
    "SCHEMES",
    "make_stepper",
    "step_kgw",
    "step_kgw_complex",
    "step_sw",
    "step_sp",
    "step_nf2",
    "default_dt",
]

SYSTEMS = ("KGW", "KGW_complex", "SW", "SP", "NF2")
SCHEMES = {
    "KGW": ("strang", "yoshida4"),
    "KGW_complex": ("rk4",),
    "SW": ("strang", "yoshida4"),
    "SP": ("strang", "yoshida4"),
    "NF2": ("rk4",),
}
_FRAME = {"KGW": "tau", "KGW_complex": "T", "SW": "T", "SP": "T", "NF2": "T"}

# fourth-order triple jump
_YS = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_YOSHIDA = (_YS, 1.0 - 2.0 * _YS, _YS)


class SolverFailure(RuntimeError):
    """Non-finite or exploding fields; ``step`` is the failing step index."""

    def __init__(self, message, step=None):
        self.step = step
        super().__init__(message if step is None else f"{message} (step {step})")


def default_dt(epsilon: float, grid: Grid) -> float:
    """``min(1e-3, 0.1 sqrt(eps) dx)``, the wave-stiffness guided default in frame T."""
    return min(1e-3, 0.1 * np.sqrt(epsilon) * grid.dx)


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters for one system.

    ``dt`` and ``t_end`` are in the native time of the system: tau for
    ``KGW``, T for the others.
    """

    system: str
    epsilon: float
    dt: float
    t_end: float = 1.0
    scheme: str = ""
    diagnostics_period: int = 0
    grid: Grid = field(default_factory=Grid)
    dealias: bool = True

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ValueError(f"unknown system {self.system!r}; choose from {SYSTEMS}")
        if self.system != "SP" and not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        scheme = self.scheme or SCHEMES[self.system][0]
        if scheme not in SCHEMES[self.system]:
            raise ValueError(f"scheme {scheme!r} not available for {self.system}; use {SCHEMES[self.system]}")
        object.__setattr__(self, "scheme", scheme)

    @property
    def frame(self) -> str:
        return _FRAME[self.system]

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@lru_cache(maxsize=16)
def _toolbox(grid: Grid, dealias: bool) -> SpectralToolbox:
    return SpectralToolbox(grid, dealias)


def _sinc_rotation(omega, h):
    """cos(w h), sin(w h)/w and w sin(w h), with the w -> 0 limits."""
    c = np.cos(omega * h)
    small = omega == 0
    w = np.where(small, 1.0, omega)
    s_over = np.where(small, h, np.sin(omega * h) / w)
    w_s = np.where(small, 0.0, omega * np.sin(omega * h))
    return c, s_over, w_s


class _Stepper:
    frame = "T"

    def __init__(self, cfg: SolverConfig):
        self.cfg = cfg
        self.eps = cfg.epsilon
        self.tb = _toolbox(cfg.grid, cfg.dealias)
        self.k2 = self.tb.k2
        self.mask = self.tb.mask if cfg.dealias else np.ones(cfg.grid.shape, dtype=bool)
        self._cache = {}
        n = cfg.grid.n
        neg = (-np.arange(n)) % n
        self._neg = np.ix_(*([neg] * cfg.grid.dim))

    # helpers ------------------------------------------------------------------
    def fft(self, f):
        return np.fft.fftn(f)

    def ifft(self, f):
        return np.fft.ifftn(f)

    def proj(self, fh):
        return fh * self.mask

    def source(self, f):
        """Projected transform of a wave source with its mean removed."""
        fh = self.fft(f) * self.mask
        fh.flat[0] = 0.0
        return fh

    def check(self, arrays, step):
        for a in arrays:
            if not np.all(np.isfinite(a)):
                raise SolverFailure(f"{self.cfg.system}: non-finite field", step)
        peak = max(float(np.max(np.abs(a))) for a in arrays)
        if peak > 1e12:
            raise SolverFailure(f"{self.cfg.system}: field norm exploded ({peak:.3g})", step)

    # interface ------------------------------------------------------------------
    def advance(self, state: FieldState, n_steps: int = 1) -> FieldState:
        spec, t = self.to_spec(state)
        dt = self.cfg.dt
        for i in range(n_steps):
            spec = self.step_spec(spec, t, dt)
            t = t + dt
            if not all(np.all(np.isfinite(a)) for a in spec):
                raise SolverFailure(f"{self.cfg.system}: non-finite field", i + 1)
        out = self.from_spec(spec, t, state)
        self.check(out.arrays(), n_steps)
        return out

    def _prepare(self, state: FieldState) -> FieldState:
        if self.frame == "T":
            if state.frame != "T" and state.epsilon is None:
                raise FrameError("state needs epsilon to move to frame T")
            return state.to_frame("T")
        return state.to_real()


class KGWStepper(_Stepper):
    """Real form in tau: exact quadratic flow plus exact coupling kick."""

    frame = "tau"

    def __init__(self, cfg):
        super().__init__(cfg)
        self.omega_u = np.sqrt(1.0 + self.eps * self.k2)
        self.omega_phi = np.sqrt(self.eps) * self.tb.kabs

    def to_spec(self, state):
        s = self._prepare(state)
        m = self.mask
        return [self.fft(s.u) * m, self.fft(s.p_u) * m, self.fft(s.phi) * m, self.fft(s.p_phi) * m], s.time

    def from_spec(self, spec, t, like):
        u, pu, phi, pphi = (self.ifft(a).real for a in spec)
        return FieldState.real(u, pu, phi, pphi, t, self.eps)

    def _rot(self, h):
        key = ("A", h)
        if key not in self._cache:
            self._cache[key] = (_sinc_rotation(self.omega_u, h), _sinc_rotation(self.omega_phi, h))
        return self._cache[key]

    def flow_A(self, spec, h):
        (cu, su, wu), (cp, sp, wp) = self._rot(h)
        u, pu, phi, pphi = spec
        return [cu * u + su * pu, -wu * u + cu * pu, cp * phi + sp * pphi, -wp * phi + cp * pphi]

    def flow_B(self, spec, h):
        u_hat, pu, phi_hat, pphi = spec
        u = self.ifft(u_hat).real
        phi = self.ifft(phi_hat).real
        phi = phi - phi.mean()
        pu = pu - h * self.proj(self.fft(2.0 * self.eps * phi * u))
        pphi = pphi - h * self.source(self.eps * u * u)
        return [u_hat, pu, phi_hat, pphi]

    def strang(self, spec, h):
        spec = self.flow_A(spec, h / 2)
        spec = self.flow_B(spec, h)
        return self.flow_A(spec, h / 2)

    def step_spec(self, spec, t, dt):
        if self.cfg.scheme == "yoshida4":
            for w in _YOSHIDA:
                spec = self.strang(spec, w * dt)
            return spec
        return self.strang(spec, dt)


class SWStepper(KGWStepper):
    """Schroedinger-wave in frame T: exact linear flows plus exact phase kick."""

    frame = "T"

    def __init__(self, cfg):
        _Stepper.__init__(self, cfg)
        self.omega_phi = self.tb.kabs / np.sqrt(self.eps)

    def to_spec(self, state):
        s = self._prepare(state)
        m = self.mask
        return [self.fft(s.psi), self.fft(s.phi) * m, self.fft(s.p_phi) * m], s.time

    def from_spec(self, spec, t, like):
        psi = self.ifft(spec[0])
        phi, p = (self.ifft(a).real for a in spec[1:])
        return FieldState.complex(psi, phi, p, t, "T", self.eps)

    def _rot(self, h):
        key = ("A", h)
        if key not in self._cache:
            c, s_over, w_s = _sinc_rotation(self.omega_phi, h)
            # phi' = c phi + (s/w)/eps p,  p' = -eps w s phi + c p
            self._cache[key] = (np.exp(-0.5j * self.k2 * h), c, s_over / self.eps, self.eps * w_s)
        return self._cache[key]

    def flow_A(self, spec, h):
        kin, c, a, b = self._rot(h)
        psi, phi, p = spec
        return [kin * psi, c * phi + a * p, -b * phi + c * p]

    def flow_B(self, spec, h):
        psi_hat, phi_hat, p = spec
        psi = self.ifft(psi_hat)
        phi = self.ifft(phi_hat).real
        psi = np.exp(-1j * h * (phi - phi.mean())) * psi
        p = p - h * self.source(np.abs(psi) ** 2)
        return [self.fft(psi), phi_hat, p]


class SPStepper(SWStepper):
    """Schroedinger-Poisson split step; phi is slaved to |Psi|^2."""

    def __init__(self, cfg):
        _Stepper.__init__(self, cfg)
        self.eps = cfg.epsilon if cfg.epsilon else None
        inv = np.zeros_like(self.k2)
        nz = self.k2 > 0
        inv[nz] = -1.0 / self.k2[nz]
        self.inv_lap = inv

    def potential_hat(self, psi):
        return self.inv_lap * self.source(np.abs(psi) ** 2)

    def to_spec(self, state):
        if state.frame != "T":
            state = state.to_frame("T")
        else:
            state = state.to_complex()
        return [self.fft(state.psi)], state.time

    def from_spec(self, spec, t, like):
        psi = self.ifft(spec[0])
        phi = self.ifft(self.potential_hat(psi)).real
        return FieldState.complex(psi, phi, np.zeros_like(phi), t, "T", self.eps)

    def _rot(self, h):
        key = ("A", h)
        if key not in self._cache:
            self._cache[key] = np.exp(-0.5j * self.k2 * h)
        return self._cache[key]

    def flow_A(self, spec, h):
        return [self._rot(h) * spec[0]]

    def flow_B(self, spec, h):
        psi = self.ifft(spec[0])
        phi = self.ifft(self.potential_hat(psi)).real
        return [self.fft(np.exp(-1j * h * phi) * psi)]


class _RK4Stepper(_Stepper):
    def to_spec(self, state):
        s = self._prepare(state)
        m = self.mask
        return [self.fft(s.psi) * m, self.fft(s.phi) * m, self.fft(s.p_phi) * m], s.time

    def from_spec(self, spec, t, like):
        psi = self.ifft(spec[0])
        phi, p = (self.ifft(a).real for a in spec[1:])
        return FieldState.complex(psi, phi, p, t, "T", self.eps)

    def step_spec(self, spec, t, dt):
        k1 = self.rhs(t, spec)
        k2 = self.rhs(t + dt / 2, [a + dt / 2 * b for a, b in zip(spec, k1)])
        k3 = self.rhs(t + dt / 2, [a + dt / 2 * b for a, b in zip(spec, k2)])
        k4 = self.rhs(t + dt, [a + dt * b for a, b in zip(spec, k3)])
        return [a + dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(spec, k1, k2, k3, k4)]


class KGWComplexStepper(_RK4Stepper):
    """Exact gauged complex form with the fast exp(2iT/eps) remainders."""

    remainders = True

    def rhs(self, t, spec):
        psi_hat, phi_hat, p_hat = spec
        eps = self.eps
        psi = self.ifft(psi_hat)
        phi = self.ifft(phi_hat).real
        phi = phi - phi.mean()
        if self.remainders:
            e = np.exp(2j * t / eps)
            w_hat = psi_hat + e * np.conj(psi_hat[self._neg])
            w = psi + e * np.conj(psi)
            u2 = 0.5 * np.abs(w) ** 2
        else:
            w_hat, w, u2 = psi_hat, psi, np.abs(psi) ** 2
        dpsi = -1j * self.proj(0.5 * self.k2 * w_hat + self.fft(phi * w))
        dphi = p_hat / eps
        dp = -self.k2 * phi_hat - self.source(u2)
        return [dpsi, dphi, dp]


class NF2Stepper(_RK4Stepper):
    """Hamilton equations of H0 + eps Z1 + eps^2 Z2 in frame T."""

    def rhs(self, t, spec):
        psi_hat, phi_hat, p_hat = spec
        eps, k2 = self.eps, self.k2
        psi = self.ifft(psi_hat)
        lap_psi = self.ifft(-k2 * psi_hat)
        phi = self.ifft(phi_hat).real
        phi = phi - phi.mean()
        p = self.ifft(p_hat).real
        rho = np.abs(psi) ** 2
        a = self.fft(phi * psi)
        c = self.fft(p * psi)
        d = self.fft(phi * lap_psi / 4 + 1j * p * lap_psi / 16 - phi * phi * psi / 2 + rho * psi / 8)
        lin = 0.5 * k2 * psi_hat + a
        corr = -(k2 * k2) * psi_hat / 8 + d - k2 * a / 4 + 1j * k2 * c / 16
        dpsi = -1j * self.proj(lin + eps * corr)
        cross = np.conj(psi) * lap_psi
        dphi = p_hat / eps + eps * self.source(-cross.imag / 8)
        dp = -k2 * phi_hat + self.source(-rho + eps * (-cross.real / 2 + phi * rho))
        return [dpsi, dphi, dp]


_CLASSES = {
    "KGW": KGWStepper,
    "KGW_complex": KGWComplexStepper,
    "SW": SWStepper,
    "SP": SPStepper,
    "NF2": NF2Stepper,
}


@lru_cache(maxsize=32)
def make_stepper(cfg: SolverConfig) -> _Stepper:
    """Stepper object for ``cfg`` (cached; steppers hold only precomputed arrays)."""
    return _CLASSES[cfg.system](cfg)


def _step(system, state, cfg, n_steps):
    if cfg.system != system:
        raise ValueError(f"config is for {cfg.system}, not {system}")
    return make_stepper(cfg).advance(state, n_steps)


def step_kgw(state: FieldState, cfg: SolverConfig, n_steps: int = 1) -> FieldState:
    """Symplectic splitting step(s) of the real-form system in tau.

    The quadratic part is solved exactly mode by mode (frequencies
    ``sqrt(1 + eps k^2)`` and ``sqrt(eps) |k|``); the coupling ``eps int phi u^2``
    is an exact kick. ``cfg.scheme`` is ``"strang"`` or ``"yoshida4"``.
    """
    return _step("KGW", state, cfg, n_steps)


def step_kgw_complex(state: FieldState, cfg: SolverConfig, n_steps: int = 1) -> FieldState:
    """rk4 step(s) of the gauged complex form, remainders included."""
    return _step("KGW_complex", state, cfg, n_steps)


def step_sw(state: FieldState, cfg: SolverConfig, n_steps: int = 1) -> FieldState:
    """Strang step(s) of the Schroedinger-wave system in frame T."""
    return _step("SW", state, cfg, n_steps)


def step_sp(state: FieldState, cfg: SolverConfig, n_steps: int = 1) -> FieldState:
    """Split step(s) of the Schroedinger-Poisson system in frame T."""
    return _step("SP", state, cfg, n_steps)


def step_nf2(state: FieldState, cfg: SolverConfig, n_steps: int = 1) -> FieldState:
    """rk4 step(s) of the second-order normal form system in frame T."""
    return _step("NF2", state, cfg, n_steps)
