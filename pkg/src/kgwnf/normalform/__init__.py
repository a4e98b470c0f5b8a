"""Normal form construction with respect to the harmonic flow of h."""

from .engine import LieSeriesLedger, NormalFormResult, apply_exponential, lie_collect, normal_form, z2_shortcut_check
from .operators import (
    H0,
    H1,
    H_HARMONIC,
    K_FREE,
    AveragePreconditionError,
    SmallDivisorError,
    L_h,
    L_h_inverse,
    L_k,
    deviation,
    flow_average,
    generator_series,
    solve_generator,
)
from .reference import reference

__all__ = [
    "H0",
    "H1",
    "H_HARMONIC",
    "K_FREE",
    "AveragePreconditionError",
    "SmallDivisorError",
    "LieSeriesLedger",
    "NormalFormResult",
    "L_h",
    "L_h_inverse",
    "L_k",
    "apply_exponential",
    "deviation",
    "flow_average",
    "generator_series",
    "lie_collect",
    "normal_form",
    "reference",
    "solve_generator",
    "z2_shortcut_check",
]
