"""Periodic grids and Fourier-space operators."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["Grid", "SpectralToolbox"]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L/2, L/2)^dim``.

    Parameters
    ----------
    dim : int
        1, 2 or 3.
    n : int
        Points per dimension, a power of two.
    box_length : float
        Side length ``L``.
    """

    dim: int = 1
    n: int = 256
    box_length: float = 32.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 4 or self.n & (self.n - 1):
            raise ValueError(f"points per dimension must be a power of two >= 4, got {self.n}")
        if not self.box_length > 0:
            raise ValueError("box_length must be positive")

    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def dx(self) -> float:
        return self.box_length / self.n

    @property
    def cell_volume(self) -> float:
        return self.dx ** self.dim

    @cached_property
    def axes(self):
        x = -self.box_length / 2 + self.dx * np.arange(self.n)
        return tuple(x for _ in range(self.dim))

    @cached_property
    def coords(self):
        return np.meshgrid(*self.axes, indexing="ij")

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c * c for c in self.coords))

    def integrate(self, f: np.ndarray):
        """Trapezoidal (spectrally accurate) integral over the box."""
        return f.sum() * self.cell_volume

    def norm2(self, f: np.ndarray) -> float:
        return float(np.real(self.integrate(np.abs(f) ** 2)))


class SpectralToolbox:
    """FFT-based derivatives on a :class:`Grid`.

    The Nyquist wavenumber is set to zero in first derivatives so that real
    fields stay real; Laplacians use the full ``-|k|^2``.
    """

    def __init__(self, grid: Grid, dealias: bool = True):
        self.grid = grid
        self.dealias_enabled = dealias
        n, L = grid.n, grid.box_length
        k1 = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
        self.k1 = k1
        self.kvec = np.meshgrid(*([k1] * grid.dim), indexing="ij")
        self.k2 = sum(k * k for k in self.kvec)
        self.kabs = np.sqrt(self.k2)
        k1d = k1.copy()
        k1d[n // 2] = 0.0
        self.kdiff = np.meshgrid(*([k1d] * grid.dim), indexing="ij")
        # 2/3 rule: keep |m| < n/3 in every direction
        m = np.fft.fftfreq(n, d=1.0 / n)
        keep1 = np.abs(m) < n / 3
        mask = np.ones(grid.shape, dtype=bool)
        for ax in range(grid.dim):
            shape = [1] * grid.dim
            shape[ax] = n
            mask = mask & keep1.reshape(shape)
        self.mask = mask
        inv = np.zeros_like(self.k2)
        nz = self.k2 > 0
        inv[nz] = -1.0 / self.k2[nz]
        self._inv_lap = inv

    # transforms -------------------------------------------------------------
    @staticmethod
    def fft(f):
        return np.fft.fftn(f)

    @staticmethod
    def ifft(fh):
        return np.fft.ifftn(fh)

    def _real_like(self, f, out):
        return out.real if np.isrealobj(f) else out

    # operators ----------------------------------------------------------------
    def gradient(self, f):
        fh = self.fft(f)
        return [self._real_like(f, self.ifft(1j * k * fh)) for k in self.kdiff]

    def derivative(self, f, axis: int = 0):
        return self._real_like(f, self.ifft(1j * self.kdiff[axis] * self.fft(f)))

    def laplacian(self, f):
        return self._real_like(f, self.ifft(-self.k2 * self.fft(f)))

    def inverse_laplacian_zero_mean(self, s):
        """Solve ``lap phi = s - mean(s)`` with ``mean(phi) = 0``."""
        return self._real_like(s, self.ifft(self._inv_lap * self.fft(s)))

    def dealias(self, f):
        """Project onto the 2/3-rule band (identity when dealiasing is off)."""
        if not self.dealias_enabled:
            return f
        return self._real_like(f, self.ifft(self.mask * self.fft(f)))

    def zero_mean(self, f):
        return f - f.mean()
