"""Pseudo-spectral integration of the field systems on a periodic box."""

from .evaluate import evaluate, field_values, hamiltonian_vector_field, variational_derivative
from .grid import Grid, SpectralToolbox
from .observables import (gaussian_state, grad_sq, hamiltonian, kgw_energy, mass, nf2_energy,
                          sp_energy, sw_energy)
from .run import (DIAGNOSTIC_COLUMNS, ConfigurationError, DiagnosticsRecord, Trajectory,
                  compare_trajectories, integrate, sup_error, well_prepared_state,
                  write_diagnostics_csv)
from .snapshot import SnapshotError, read_snapshot, write_snapshot
from .state import FieldState, FrameError
from .systems import (SYSTEMS, SolverConfig, SolverFailure, default_dt, make_stepper, step_kgw,
                      step_kgw_complex, step_nf2, step_sp, step_sw)
from .transforms import g1_flow_map, g1_rhs

__all__ = [
    "Grid", "SpectralToolbox", "FieldState", "FrameError", "SolverConfig", "SolverFailure",
    "SYSTEMS", "default_dt", "make_stepper", "step_kgw", "step_kgw_complex", "step_sw", "step_sp",
    "step_nf2", "g1_flow_map", "g1_rhs", "mass", "grad_sq", "kgw_energy", "sw_energy",
    "nf2_energy", "sp_energy", "hamiltonian", "gaussian_state", "well_prepared_state",
    "integrate", "Trajectory", "DiagnosticsRecord", "DIAGNOSTIC_COLUMNS", "write_diagnostics_csv",
    "compare_trajectories", "sup_error", "ConfigurationError", "evaluate", "field_values",
    "variational_derivative", "hamiltonian_vector_field", "read_snapshot", "write_snapshot",
    "SnapshotError",
]
