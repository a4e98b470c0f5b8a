"""Spherically symmetric stationary states of the Schroedinger-Poisson system."""

from .cartesian import imaginary_time_ground, radial_average, sp_operator, sp_potential
from .existence import (ExistenceVerdict, eigen_sequence, existence_gate, mu_from_omega,
                        omega_from_mu)
from .export import profile_on_grid, read_profile_csv, write_profile_csv, write_profile_snapshot
from .radial import (EigenResult, RadialProfile, ShootingFailure, imaginary_time_radial,
                     radial_norm, radial_potential, radial_residual, rescale_profile, shoot_radial)

__all__ = [
    "EigenResult", "RadialProfile", "ShootingFailure", "shoot_radial", "imaginary_time_radial",
    "imaginary_time_ground", "radial_average", "sp_operator", "sp_potential", "radial_norm",
    "radial_potential", "radial_residual", "rescale_profile", "mu_from_omega", "omega_from_mu",
    "eigen_sequence", "ExistenceVerdict", "existence_gate", "write_profile_csv",
    "read_profile_csv", "profile_on_grid", "write_profile_snapshot",
]
