"""Physical units for the dimensionless field equations.

For bosons of mass ``m`` and total mass ``M = N m`` the coupling parameter is
``mu = (1/N) (m_P / m)^2`` with the Planck mass ``m_P = sqrt(hbar c / G)``,
so ``epsilon = 1 / mu^2``; lengths are measured in
``lambda = hbar^2 / (G N m^3)``. Everything is in CGS units.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

__all__ = ["CONSTANTS", "PhysicalParams", "convert_units", "particle_mass_from", "solar_masses"]

# CODATA 2018 values and the IAU nominal solar mass, pinned for reproducibility
CONSTANTS = {
    "hbar": 1.054571817e-27,  # erg s
    "c": 2.99792458e10,  # cm / s
    "G": 6.67430e-8,  # cm^3 / (g s^2)
    "solar_mass": 1.98847e33,  # g
}


def planck_mass(constants=None) -> float:
    k = constants or CONSTANTS
    return math.sqrt(k["hbar"] * k["c"] / k["G"])


def solar_masses(x: float, constants=None) -> float:
    """Grams in ``x`` solar masses."""
    return x * (constants or CONSTANTS)["solar_mass"]


@dataclass(frozen=True)
class PhysicalParams:
    """Derived parameters; masses in grams, lengths in centimetres."""

    particle_mass: float
    total_mass: float
    N: float
    mu: float
    mu2: float
    epsilon: float
    length_scale: float
    time_scale: float

    def to_dict(self) -> dict:
        return asdict(self)


def convert_units(particle_mass: float, total_mass: float, constants=None) -> PhysicalParams:
    """Dimensionless parameters for particle mass ``m`` and total mass ``N m`` (grams)."""
    if not (particle_mass > 0 and total_mass > 0):
        raise ValueError("masses must be positive")
    k = constants or CONSTANTS
    m = float(particle_mass)
    n = float(total_mass) / m
    mp = planck_mass(k)
    mu = (mp / m) ** 2 / n
    lam = k["hbar"] ** 2 / (k["G"] * n * m ** 3)
    return PhysicalParams(m, float(total_mass), n, mu, mu * mu, 1.0 / (mu * mu), lam, lam / k["c"])


def particle_mass_from(mu: float, N: float, constants=None) -> float:
    """Inverse map: the particle mass giving ``mu`` for ``N`` particles."""
    if not (mu > 0 and N > 0):
        raise ValueError("mu and N must be positive")
    return planck_mass(constants) / math.sqrt(N * mu)
