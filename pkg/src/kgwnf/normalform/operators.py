"""Averaging operators along the flows of h and k, and the generator solver.

``h = int |psi|^2`` rotates psi by a phase, so a monomial of charge
``n = #psi - #psiStar`` satisfies ``L_h F = -i n F``. ``k = int pphi^2 / 2``
translates phi by pphi, so ``L_k`` replaces one phi by pphi at a time.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

from ..algebra import kernel as kp
from ..algebra.exact import I, ExactComplex, as_exact
from ..algebra.functional import Field, Functional, charge_of, poisson_bracket
from ..algebra.parse import build

__all__ = [
    "AveragePreconditionError",
    "SmallDivisorError",
    "H_HARMONIC",
    "K_FREE",
    "H0",
    "H1",
    "flow_average",
    "deviation",
    "L_h",
    "L_h_inverse",
    "L_k",
    "solve_generator",
    "generator_series",
]

H_HARMONIC = build("int |psi|^2")
K_FREE = build("1/2 int pphi^2")
H0 = build("int (|psi|^2 + pphi^2/2)")
H1 = build("int (|grad psi + grad psiStar|^2/4 + |grad phi|^2/2 + phi (psi + psiStar)^2/2)")


class AveragePreconditionError(ValueError):
    """Raised when an operator needing zero flow average meets charge-0 terms."""


class SmallDivisorError(ArithmeticError):
    """Raised when a divisor n * frequency falls below the configured threshold."""


def flow_average(F: Functional) -> Functional:
    """Average along the flow of h: keep the phase-invariant (charge 0) terms."""
    return F.select(lambda fields: charge_of(fields) == 0)


def deviation(F: Functional) -> Functional:
    """``F - <F>``: the terms that oscillate along the flow of h."""
    return F.select(lambda fields: charge_of(fields) != 0)


def L_h(F: Functional) -> Functional:
    """``{F, h}``, computed termwise as multiplication by ``-i n``."""
    return F.map_terms(lambda f, p: [(f, kp.scale(p, I * (-charge_of(f))))])


def L_h_inverse(F: Functional, frequency=1, threshold=None) -> Functional:
    """Zero-average inverse of ``L_h`` on functionals with ``<F> = 0``.

    Each term of charge ``n`` is multiplied by ``i / (n * frequency)``. The
    default ``frequency = 1`` is the harmonic flow of the model. A non-unit
    rational frequency models a detuned oscillator; ``threshold`` turns a
    small divisor ``|n * frequency| < threshold`` into a :class:`SmallDivisorError`.

    Raises
    ------
    AveragePreconditionError
        If ``F`` has a nonzero charge-0 component.
    """
    freq = Fraction(frequency)
    if not freq:
        raise SmallDivisorError("zero frequency")
    zero_part = flow_average(F)
    if zero_part:
        raise AveragePreconditionError(
            f"L_h_inverse needs zero flow average; got {len(zero_part)} charge-0 monomial(s)")

    def scale_term(f, p):
        div = charge_of(f) * freq
        if threshold is not None and abs(div) < threshold:
            raise SmallDivisorError(f"divisor {div} below threshold {threshold} for signature {f}")
        return [(f, kp.scale(p, I / as_exact(div)))]

    return F.map_terms(scale_term)


def L_k(F: Functional) -> Functional:
    """``{F, k}``: replace each phi factor in turn by pphi, same derivatives."""
    items = []
    for fields, poly in F.data.items():
        for pos, f in enumerate(fields):
            if f is Field.PHI:
                new = fields[:pos] + (Field.PPHI,) + fields[pos + 1:]
                items.append((new, poly))
    return Functional.from_raw(items)


def generator_series(dF: Functional) -> List[Functional]:
    """Successive terms ``(L_h^{-1} L_k)^m L_h^{-1} dF`` for m = 0, 1, ...

    The list ends at the last nonzero term; its length is at most
    ``deg_phi(dF) + 1`` since ``L_k`` lowers the phi degree.
    """
    out = []
    cur = L_h_inverse(dF)
    while cur:
        out.append(cur)
        cur = L_h_inverse(L_k(cur))
    return out


def solve_generator(dF: Functional) -> Functional:
    """Zero-average solution G of ``L_{H0} G = dF``.

    Sums the terminating series ``sum_m (-1)^m (L_h^{-1} L_k)^m L_h^{-1} dF``.
    """
    G = Functional.zero()
    for m, term in enumerate(generator_series(dF)):
        G = G + term if m % 2 == 0 else G - term
    return G


def lie_derivative(K: Functional, F: Functional) -> Functional:
    """``L_K F = {F, K}``."""
    return poisson_bracket(F, K)
