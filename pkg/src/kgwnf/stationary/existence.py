"""Eigenvalue sequence and the existence test for stationary states.

The stationary Klein-Gordon-wave equations ``-lap u + 2 phi u = -mu^2 u``,
``lap phi = u^2`` are the standing-wave equations halved: with ``chi = u``
and the same ``phi``, ``-1/2 lap chi + phi chi = omega chi`` holds for
``omega = -mu^2 / 2``. No field rescaling is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from .radial import shoot_radial

__all__ = ["mu_from_omega", "omega_from_mu", "eigen_sequence", "ExistenceVerdict", "existence_gate"]


def mu_from_omega(omega: float) -> float:
    """``mu = sqrt(-2 omega)``; raises ``ValueError`` unless ``omega < 0``."""
    if not omega < 0:
        raise ValueError(f"omega must be negative, got {omega}")
    return float(np.sqrt(-2.0 * omega))


def omega_from_mu(mu: float) -> float:
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    return -0.5 * mu * mu


@lru_cache(maxsize=8)
def eigen_sequence(count: int = 4, tol: float = 1e-8) -> Tuple[float, ...]:
    """``(mu_0, ..., mu_{count-1})`` for unit-norm radial states."""
    return tuple(shoot_radial(j, tol).mu for j in range(count))


@dataclass(frozen=True)
class ExistenceVerdict:
    """Answer of :func:`existence_gate`.

    ``exists`` is ``True`` when the query matches a computed ``mu_j``,
    ``False`` above ``mu_0`` and ``None`` in between, where nothing is
    decided.
    """

    exists: Optional[bool]
    mu_0: float
    index: Optional[int]
    status: str


def existence_gate(mu_query: float, sequence: Optional[Sequence[float]] = None,
                   rtol: float = 1e-6) -> ExistenceVerdict:
    if not mu_query > 0:
        raise ValueError(f"mu must be positive, got {mu_query}")
    seq = tuple(sequence) if sequence is not None else eigen_sequence()
    mu0 = seq[0]
    for j, mu in enumerate(seq):
        if abs(mu_query - mu) <= rtol * mu:
            return ExistenceVerdict(True, mu0, j, "eigenvalue")
    if mu_query > mu0:
        return ExistenceVerdict(False, mu0, None, "above-ground-state")
    return ExistenceVerdict(None, mu0, None, "undetermined")
