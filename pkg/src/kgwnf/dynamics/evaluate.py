"""Numerical evaluation of symbolic functionals on grid fields.

This turns a :class:`~kgwnf.algebra.Functional` into numbers: its value,
its variational derivatives and the Hamiltonian vector field it generates.
It is an independent route to the hand-written right-hand sides of the
steppers, and is used to check them.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from ..algebra.functional import Field, Functional
from .grid import Grid, SpectralToolbox

__all__ = ["field_values", "evaluate", "variational_derivative", "hamiltonian_vector_field"]


def field_values(psi, phi, p_phi) -> Dict[Field, np.ndarray]:
    """Field map with ``psi`` and ``psiStar`` treated as independent."""
    psi = np.asarray(psi, dtype=complex)
    return {Field.PSI: psi, Field.PSI_STAR: np.conj(psi), Field.PHI: np.asarray(phi, complex),
            Field.PPHI: np.asarray(p_phi, complex)}


@lru_cache(maxsize=4096)
def _expand(mono, n_factors: int, dim: int) -> Tuple[Tuple[Tuple[Tuple[int, ...], ...], int], ...]:
    """Expand ``prod (d_i . d_j)`` over axes into per-factor derivative multi-indices."""
    out: dict = {}
    for axes in itertools.product(range(dim), repeat=len(mono)):
        orders = [[0] * dim for _ in range(n_factors)]
        for (i, j), a in zip(mono, axes):
            orders[i][a] += 1
            orders[j][a] += 1
        key = tuple(tuple(o) for o in orders)
        out[key] = out.get(key, 0) + 1
    return tuple(out.items())


class _Derivs:
    def __init__(self, tb: SpectralToolbox):
        self.tb = tb
        self._hat = {}
        self._cache = {}

    def multiplier(self, order):
        m = 1.0
        for a, n in enumerate(order):
            if n:
                k = self.tb.kvec[a] if n % 2 == 0 else self.tb.kdiff[a]
                m = m * (1j * k) ** n
        return m

    def apply(self, key, f, order):
        if not any(order):
            return f
        ck = (key, order)
        if ck not in self._cache:
            if key not in self._hat:
                self._hat[key] = self.tb.fft(f)
            self._cache[ck] = self.tb.ifft(self.multiplier(order) * self._hat[key])
        return self._cache[ck]


def evaluate(F: Functional, values: Dict[Field, np.ndarray], grid: Grid,
             tb: SpectralToolbox | None = None) -> complex:
    """``F`` evaluated on the given fields (trapezoidal integral over the box)."""
    tb = tb or SpectralToolbox(grid, dealias=False)
    d = _Derivs(tb)
    total = 0.0 + 0.0j
    for fields, poly in F.data.items():
        for mono, c in poly.items():
            for orders, mult in _expand(mono, len(fields), grid.dim):
                prod = 1.0
                for f, o in zip(fields, orders):
                    prod = prod * d.apply(f, values[f], o)
                total += complex(c) * mult * grid.integrate(prod)
    return total


def variational_derivative(F: Functional, field: Field, values: Dict[Field, np.ndarray],
                           grid: Grid, tb: SpectralToolbox | None = None) -> np.ndarray:
    """``delta F / delta field`` with the other fields held fixed."""
    tb = tb or SpectralToolbox(grid, dealias=False)
    d = _Derivs(tb)
    out = np.zeros(grid.shape, dtype=complex)
    for fields, poly in F.data.items():
        slots = [k for k, f in enumerate(fields) if f is field]
        if not slots:
            continue
        for mono, c in poly.items():
            for orders, mult in _expand(mono, len(fields), grid.dim):
                for k in slots:
                    prod = 1.0
                    for i, (f, o) in enumerate(zip(fields, orders)):
                        if i != k:
                            prod = prod * d.apply(f, values[f], o)
                    # integrate by parts: d^a moves off the slot as (-d)^a
                    back = tuple(orders[k])
                    sign = (-1) ** sum(back)
                    term = prod if not any(back) else tb.ifft(d.multiplier(back) * tb.fft(prod))
                    out += complex(c) * mult * sign * term
    return out


def hamiltonian_vector_field(K: Functional, psi, phi, p_phi, grid: Grid,
                             tb: SpectralToolbox | None = None):
    """Time derivatives ``(dpsi, dphi, dp_phi)`` generated by ``K``.

    Uses ``{psi, psiStar} = -i`` and ``{phi, p_phi} = 1``, so
    ``dpsi = -i dK/dpsiStar``, ``dphi = dK/dp_phi``, ``dp_phi = -dK/dphi``.
    """
    tb = tb or SpectralToolbox(grid, dealias=False)
    vals = field_values(psi, phi, p_phi)
    dpsi = -1j * variational_derivative(K, Field.PSI_STAR, vals, grid, tb)
    dphi = variational_derivative(K, Field.PPHI, vals, grid, tb).real
    dp = -variational_derivative(K, Field.PHI, vals, grid, tb).real
    return dpsi, dphi, dp
