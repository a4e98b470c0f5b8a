"""Discrete field configurations and their frame conversions.

Two frames are used. In frame ``"tau"`` the time is tau and the massive field
is either the real pair ``(u, p_u)`` or ``psi = (u + i p_u)/sqrt(2)``. In frame
``"T"`` the time is ``T = eps * tau`` and the massive field is the gauged
``Psi = exp(i tau) psi``. ``p_phi`` is always the momentum conjugate to
``phi`` in the tau dynamics, so ``p_phi = eps * dphi/dT``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

__all__ = ["FieldState", "FrameError"]

FRAMES = ("tau", "T")
SQRT2 = np.sqrt(2.0)


class FrameError(ValueError):
    """Requested conversion is undefined (e.g. SP state to the tau frame)."""


@dataclass
class FieldState:
    """Field values on a grid.

    Attributes
    ----------
    form : {"real", "complex"}
    phi, p_phi : ndarray
        Massless field and its tau-momentum.
    u, p_u : ndarray, optional
        Real pair, present when ``form == "real"``.
    psi : ndarray, optional
        ``psi`` (frame tau) or ``Psi`` (frame T), present when ``form == "complex"``.
    time : float
        tau or T depending on ``frame``.
    frame : {"tau", "T"}
    epsilon : float
        Needed for frame changes; ``None`` for states without a tau frame.
    """

    form: str
    phi: np.ndarray
    p_phi: np.ndarray
    u: Optional[np.ndarray] = None
    p_u: Optional[np.ndarray] = None
    psi: Optional[np.ndarray] = None
    time: float = 0.0
    frame: str = "tau"
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.form not in ("real", "complex"):
            raise ValueError(f"form must be 'real' or 'complex', got {self.form!r}")
        if self.frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}, got {self.frame!r}")
        if self.form == "real":
            if self.u is None or self.p_u is None:
                raise ValueError("real form needs u and p_u")
            if self.frame != "tau":
                raise FrameError("the real pair form lives in the tau frame")
        elif self.psi is None:
            raise ValueError("complex form needs psi")
        shapes = {a.shape for a in self.arrays()}
        if len(shapes) != 1:
            raise ValueError(f"field arrays have mismatched shapes {shapes}")

    # -- construction ---------------------------------------------------------
    @classmethod
    def real(cls, u, p_u, phi, p_phi, time=0.0, epsilon=None) -> FieldState:
        return cls("real", np.asarray(phi, float), np.asarray(p_phi, float), u=np.asarray(u, float),
                   p_u=np.asarray(p_u, float), time=time, frame="tau", epsilon=epsilon)

    @classmethod
    def complex(cls, psi, phi, p_phi, time=0.0, frame="T", epsilon=None) -> FieldState:
        return cls("complex", np.asarray(phi, float), np.asarray(p_phi, float),
                   psi=np.asarray(psi, complex), time=time, frame=frame, epsilon=epsilon)

    def arrays(self):
        if self.form == "real":
            return [self.u, self.p_u, self.phi, self.p_phi]
        return [self.psi, self.phi, self.p_phi]

    def copy(self) -> FieldState:
        return replace(self, **{k: (None if getattr(self, k) is None else getattr(self, k).copy())
                                for k in ("phi", "p_phi", "u", "p_u", "psi")})

    # -- conversions ------------------------------------------------------------
    def _need_eps(self):
        if self.epsilon is None or not self.epsilon > 0:
            raise FrameError("frame conversion needs a positive epsilon")
        return self.epsilon

    @property
    def tau(self) -> float:
        return self.time if self.frame == "tau" else self.time / self._need_eps()

    def to_complex(self) -> FieldState:
        """Same frame, complex form."""
        if self.form == "complex":
            return self
        psi = (self.u + 1j * self.p_u) / SQRT2
        return FieldState.complex(psi, self.phi.copy(), self.p_phi.copy(), self.time, "tau", self.epsilon)

    def to_frame(self, frame: str) -> FieldState:
        """Complex form in ``frame``, applying the gauge and time rescaling."""
        c = self.to_complex()
        if frame == c.frame:
            return c
        eps = c._need_eps()
        if frame == "T":
            tau = c.time
            return FieldState.complex(np.exp(1j * tau) * c.psi, c.phi.copy(), c.p_phi.copy(),
                                      eps * tau, "T", eps)
        if frame == "tau":
            tau = c.time / eps
            return FieldState.complex(np.exp(-1j * tau) * c.psi, c.phi.copy(), c.p_phi.copy(),
                                      tau, "tau", eps)
        raise FrameError(f"unknown frame {frame!r}")

    def to_real(self) -> FieldState:
        """Real pair form in the tau frame."""
        if self.form == "real":
            return self
        c = self.to_frame("tau")
        return FieldState.real(SQRT2 * c.psi.real, SQRT2 * c.psi.imag, c.phi.copy(), c.p_phi.copy(),
                               c.time, c.epsilon)

    def massive(self, frame: str = "T") -> np.ndarray:
        """``Psi`` (frame T) or ``psi`` (frame tau) as an array."""
        return self.to_frame(frame).psi
