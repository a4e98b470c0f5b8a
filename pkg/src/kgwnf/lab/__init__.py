"""Configuration, orchestration, reporting and unit conversion."""

from .config import SCHEMA_VERSION, ConfigError, ExperimentConfig, load_config, parse_config
from .report import report_normal_form, reference_diff
from .runner import ExperimentResult, RunFailure, fit_slope, initial_state, run_experiment, run_system
from .units import CONSTANTS, PhysicalParams, convert_units, particle_mass_from, solar_masses

__all__ = [
    "SCHEMA_VERSION", "ConfigError", "ExperimentConfig", "load_config", "parse_config",
    "report_normal_form", "reference_diff", "ExperimentResult", "RunFailure", "fit_slope",
    "initial_state", "run_experiment", "run_system", "CONSTANTS", "PhysicalParams",
    "convert_units", "particle_mass_from", "solar_masses",
]
