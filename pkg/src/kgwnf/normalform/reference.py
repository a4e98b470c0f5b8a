"""Published closed forms of the order-1 and order-2 normal form.

Each entry is written in the input grammar of :func:`kgwnf.algebra.build`
and transcribed summand by summand from the displayed expressions, so a
golden comparison only relies on canonicalization, never on string layout.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict

from ..algebra import Functional, build

__all__ = ["REFERENCE_TEXT", "reference", "available"]

_F2_AVERAGED = (
    "-1/8 int |lap psi|^2"
    " + 1/4 int phi (psiStar lap psi + psi lap psiStar)"
    " + i/16 int pphi (psiStar lap psi - psi lap psiStar)"
    " - 1/2 int phi^2 |psi|^2"
    " + 1/16 int |psi|^4"
)

_F2_OSCILLATING = (
    "-1/8 int ((lap psi)^2 + (lap psiStar)^2)"
    " + 1/8 int |psi|^2 (psi^2 + psiStar^2)"
    " + 1/32 int (psi^4 + psiStar^4)"
    " - 1/8 int (lap phi) (psi^2 + psiStar^2)"
    " + 1/2 int phi (psi lap psi + psiStar lap psiStar)"
    " - 1/2 int phi^2 (psi^2 + psiStar^2)"
    " - i/8 int pphi (psi lap psi - psiStar lap psiStar)"
    " + i/4 int phi pphi (psi^2 - psiStar^2)"
)

REFERENCE_TEXT: Dict[str, str] = {
    "H0": "int (|psi|^2 + pphi^2/2)",
    "H1": "int (|grad psi + grad psiStar|^2/4 + |grad phi|^2/2 + phi (psi + psiStar)^2/2)",
    "Z1": "int (|grad phi|^2/2 + |grad psi|^2/2 + phi |psi|^2)",
    "dH1": "int (((grad psi)^2 + (grad psiStar)^2)/4 + phi (psi^2 + psiStar^2)/2)",
    "G1": (
        "int (i/8 ((grad psi)^2 - (grad psiStar)^2) + i/4 phi (psi^2 - psiStar^2)"
        " + 1/8 pphi (psi^2 + psiStar^2))"
    ),
    "Z2": _F2_AVERAGED,
    "F2": _F2_AVERAGED + " + " + _F2_OSCILLATING,
    "dF2": _F2_OSCILLATING,
    # successive terms of the generator series at order two
    "Lhinv_dF2": (
        "-i/16 int ((lap psi)^2 - (lap psiStar)^2)"
        " + i/16 int |psi|^2 (psi^2 - psiStar^2)"
        " + i/128 int (psi^4 - psiStar^4)"
        " - i/16 int (lap phi) (psi^2 - psiStar^2)"
        " + i/4 int phi (psi lap psi - psiStar lap psiStar)"
        " - i/4 int phi^2 (psi^2 - psiStar^2)"
        " + 1/16 int pphi (psi lap psi + psiStar lap psiStar)"
        " - 1/8 int phi pphi (psi^2 + psiStar^2)"
    ),
    "Lk_Lhinv_dF2": (
        "i/4 int pphi (psi lap psi - psiStar lap psiStar)"
        " - i/4 int 2 phi pphi (psi^2 - psiStar^2)"
        " - 1/8 int pphi^2 (psi^2 + psiStar^2)"
        " - i/16 int (psi^2 - psiStar^2) lap pphi"
    ),
    "Lhinv_Lk_Lhinv_dF2": (
        "-1/8 int pphi (psi lap psi + psiStar lap psiStar)"
        " + 1/4 int phi pphi (psi^2 + psiStar^2)"
        " - i/16 int pphi^2 (psi^2 - psiStar^2)"
        " + 1/32 int (lap pphi) (psi^2 + psiStar^2)"
    ),
    "Lk_Lhinv_Lk_Lhinv_dF2": "1/4 int pphi^2 (psi^2 + psiStar^2)",
    "Lhinv_Lk_sq_Lhinv_dF2": "i/8 int pphi^2 (psi^2 - psiStar^2)",
    "G2": (
        "-i/16 int ((lap psi)^2 - (lap psiStar)^2)"
        " + i/16 int |psi|^2 (psi^2 - psiStar^2)"
        " + i/128 int (psi^4 - psiStar^4)"
        " - i/16 int (lap phi) (psi^2 - psiStar^2)"
        " + i/4 int phi (psi lap psi - psiStar lap psiStar)"
        " - i/4 int phi^2 (psi^2 - psiStar^2)"
        " + 3/16 int pphi (psi lap psi + psiStar lap psiStar)"
        " - 3/8 int phi pphi (psi^2 + psiStar^2)"
        " + 3i/16 int pphi^2 (psi^2 - psiStar^2)"
        " - 1/32 int (lap pphi) (psi^2 + psiStar^2)"
    ),
}


@lru_cache(maxsize=None)
def reference(name: str) -> Functional:
    """Canonical :class:`Functional` of a published expression, e.g. ``"G2"``."""
    try:
        text = REFERENCE_TEXT[name]
    except KeyError:
        raise KeyError(f"no published expression named {name!r}; known: {sorted(REFERENCE_TEXT)}") from None
    return build(text)


def available() -> list:
    return sorted(REFERENCE_TEXT)
