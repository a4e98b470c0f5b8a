"""Exact polynomials in the pairwise derivative contractions of a monomial's factors.

A kernel variable ``(i, j)`` with ``i <= j`` stands for ``d_i . d_j``: the
gradient acting on factor ``i`` contracted with the gradient acting on factor
``j``. ``(i, i)`` is the Laplacian of factor ``i``. In Fourier space, with
``d_i -> 1j*k_i``, the variable becomes ``-k_i . k_j``.

Monomials are sorted tuples of variables (with repetition); polynomials are
plain dicts ``{monomial: ExactComplex}`` with no zero entries.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Tuple

from .exact import ONE, ExactComplex

Var = Tuple[int, int]
Monomial = Tuple[Var, ...]
Poly = Dict[Monomial, ExactComplex]
# linear combination of derivative symbols: ((index, integer coefficient), ...)
LinForm = Tuple[Tuple[int, int], ...]
# one LinForm per old index
Substitution = Tuple[LinForm, ...]

UNIT: Monomial = ()


def const(c) -> Poly:
    c = c if isinstance(c, ExactComplex) else ExactComplex(c)
    return {UNIT: c} if c else {}


def var(i: int, j: int) -> Poly:
    return {(_v(i, j),): ONE}


def _v(i: int, j: int) -> Var:
    return (i, j) if i <= j else (j, i)


def add_into(acc: Poly, p: Poly, scale: ExactComplex | None = None) -> Poly:
    """In-place ``acc += scale * p``; returns ``acc``."""
    for m, c in p.items():
        if scale is not None:
            c = c * scale
        new = acc.get(m)
        new = c if new is None else new + c
        if new:
            acc[m] = new
        else:
            acc.pop(m, None)
    return acc


def scale(p: Poly, c: ExactComplex) -> Poly:
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
            c = c1 * c2
            prev = out.get(m)
            c = c if prev is None else prev + c
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def dot(a: LinForm, b: LinForm) -> Poly:
    """Kernel of ``(sum_a c_a d_a) . (sum_b c_b d_b)``."""
    out: Poly = {}
    for i, ci in a:
        for j, cj in b:
            add_into(out, {(_v(i, j),): ExactComplex(ci * cj)})
    return out


def indices(p: Poly) -> set:
    out = set()
    for m in p:
        for i, j in m:
            out.add(i)
            out.add(j)
    return out


@lru_cache(maxsize=None)
def _sub_var(v: Var, sub: Substitution) -> Tuple[Tuple[Monomial, ExactComplex], ...]:
    return tuple(dot(sub[v[0]], sub[v[1]]).items())


@lru_cache(maxsize=200_000)
def _sub_monomial(m: Monomial, sub: Substitution) -> Tuple[Tuple[Monomial, ExactComplex], ...]:
    out: Poly = {UNIT: ONE}
    for v in m:
        out = mul(out, dict(_sub_var(v, sub)))
        if not out:
            break
    return tuple(out.items())


def substitute(p: Poly, sub: Substitution) -> Poly:
    """Apply the linear change ``d_old -> sum c * d_new`` to every variable."""
    out: Poly = {}
    for m, c in p.items():
        if not m:
            add_into(out, {UNIT: c})
            continue
        for m2, c2 in _sub_monomial(m, sub):
            add_into(out, {m2: c2}, c)
    return out


def identity_sub(n: int) -> Substitution:
    return tuple(((i, 1),) for i in range(n))


def elimination_sub(n: int, drop: int) -> Substitution:
    """Substitution removing ``d_drop`` via the total-derivative relation.

    Integration by parts makes ``sum_i d_i`` vanish under the integral, so
    ``d_drop = -sum_{i != drop} d_i``. Remaining indices keep their labels.
    """
    rows = []
    for i in range(n):
        if i == drop:
            rows.append(tuple((j, -1) for j in range(n) if j != drop))
        else:
            rows.append(((i, 1),))
    return tuple(rows)


def permutation_sub(perm) -> Substitution:
    """Substitution sending old index ``i`` to new index ``perm[i]``."""
    return tuple(((perm[i], 1),) for i in range(len(perm)))


def degree(m: Monomial) -> int:
    return len(m)


def compose(first: Substitution, then: Substitution) -> Substitution:
    """Substitution equal to applying ``first`` and then ``then``."""
    rows = []
    for row in first:
        acc: dict = {}
        for a, c in row:
            for b, d in then[a]:
                acc[b] = acc.get(b, 0) + c * d
        rows.append(tuple(sorted((k, v) for k, v in acc.items() if v)))
    return tuple(rows)
