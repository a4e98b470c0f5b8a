"""Order-n normal form by Lie series collection and homological equations."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List

from ..algebra import Functional, poisson_bracket
from ..algebra.functional import factorial_weight
from .operators import H0 as DEFAULT_H0
from .operators import H1 as DEFAULT_H1
from .operators import H_HARMONIC, deviation, flow_average, solve_generator

__all__ = ["LieSeriesLedger", "NormalFormResult", "lie_collect", "normal_form", "z2_shortcut_check"]


@dataclass
class LieSeriesLedger:
    """Coefficients of the transformed Hamiltonian.

    ``series[k]`` is the eps^k coefficient of
    ``exp(eps^j L_{G_j}) ... exp(eps L_{G_1}) (H0 + eps H1)`` after the
    ``applied`` generators have acted; ``F[j]`` is the known part entering the
    order-j homological equation (``F[0]`` is unused and set to H0).
    """

    order: int
    series: List[Functional]
    applied: int = 0
    F: List[Functional] = field(default_factory=list)


def apply_exponential(series: List[Functional], G: Functional, j: int) -> List[Functional]:
    """Act with ``exp(eps^j L_G)`` on a truncated eps-series.

    ``new[k] = sum_m (1/m!) L_G^m old[k - m j]``, truncated at the series length.
    """
    order = len(series) - 1
    new = [Functional.zero() for _ in series]
    for k0, base in enumerate(series):
        if not base:
            continue
        cur = base
        m = 0
        while True:
            k = k0 + m * j
            if k > order or not cur:
                break
            new[k] = new[k] + cur * factorial_weight(m)
            m += 1
            if k0 + m * j > order:
                break
            cur = poisson_bracket(cur, G)
    return new


def lie_collect(H0: Functional, H1: Functional, generators: List[Functional], order: int) -> LieSeriesLedger:
    """Collect ``F_1 .. F_order`` given ``G_1 .. G_{order-1}``.

    ``F_n`` is the eps^n coefficient after the first n-1 generators have acted;
    ``G_n`` would only add ``L_{G_n} H0`` at that order, which is the
    homological term and not part of ``F_n``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(generators) < order - 1:
        raise ValueError(f"order {order} needs {order - 1} generators, got {len(generators)}")
    series = [H0, H1] + [Functional.zero() for _ in range(order - 1)]
    ledger = LieSeriesLedger(order=order, series=series, F=[H0, H1])
    for j in range(1, order):
        ledger.series = apply_exponential(ledger.series, generators[j - 1], j)
        ledger.applied = j
        ledger.F.append(ledger.series[j + 1])
    return ledger


@dataclass
class NormalFormResult:
    """Output of :func:`normal_form`.

    Attributes
    ----------
    order : int
    H0 : Functional
    corrections : list of Functional
        ``Z_1 .. Z_n``.
    generators : list of Functional
        ``G_1 .. G_n``.
    F : list of Functional
        ``F_1 .. F_n`` (``F_1 = H1``).
    residuals : list of Functional
        ``-L_{H0} G_j + F_j - Z_j``; all zero for a correct construction.
    """

    order: int
    H0: Functional
    corrections: List[Functional]
    generators: List[Functional]
    F: List[Functional]
    residuals: List[Functional]
    elapsed: float = 0.0

    def all_residuals_zero(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    def commutes_with_h(self) -> List[bool]:
        return [poisson_bracket(Z, H_HARMONIC).is_zero() for Z in self.corrections]

    def generators_zero_average(self) -> List[bool]:
        return [flow_average(G).is_zero() for G in self.generators]

    def Z(self, j: int) -> Functional:
        return self.corrections[j - 1]

    def G(self, j: int) -> Functional:
        return self.generators[j - 1]


def normal_form(order: int, H0: Functional = DEFAULT_H0, H1: Functional = DEFAULT_H1) -> NormalFormResult:
    """Normal form of ``H0 + eps H1`` with respect to ``h`` up to ``order``.

    For each j: ``Z_j = <F_j>`` and ``G_j = solve_generator(F_j - <F_j>)``.
    The transformed series is updated in place after each generator, so
    ``F_{j+1}`` is read off without re-expanding earlier exponentials.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    t0 = time.perf_counter()
    series = [H0, H1] + [Functional.zero() for _ in range(order - 1)]
    Zs, Gs, Fs, res = [], [], [], []
    for j in range(1, order + 1):
        Fj = series[j]
        Zj = flow_average(Fj)
        Gj = solve_generator(deviation(Fj))
        # -L_{H0} G_j + F_j - Z_j with L_{H0} G = {G, H0}
        residual = Fj - Zj - poisson_bracket(Gj, H0)
        Fs.append(Fj)
        Zs.append(Zj)
        Gs.append(Gj)
        res.append(residual)
        if j < order:
            series = apply_exponential(series, Gj, j)
    return NormalFormResult(order, H0, Zs, Gs, Fs, res, time.perf_counter() - t0)


def z2_shortcut_check(H1: Functional = DEFAULT_H1, G1: Functional | None = None) -> Functional:
    """``<{H1 - <H1>, G1}> / 2``, which equals ``Z_2``."""
    if G1 is None:
        G1 = solve_generator(deviation(H1))
    return flow_average(poisson_bracket(deviation(H1), G1)) / 2
