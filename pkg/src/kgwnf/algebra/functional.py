"""Polynomial field functionals in canonical momentum-kernel form.

A :class:`Functional` is a finite sum of integral monomials

    c * int  K(d_1, ..., d_m)  f_1 f_2 ... f_m  dx

in the fields psi, psiStar, phi, pphi. Each factor carries its own derivative
symbol ``d_i`` and ``K`` is a polynomial in the contractions ``d_i . d_j``.
Two integrals that differ by integration by parts are stored identically:

* factors are sorted by field label, so factor ``i`` gets derivative ``d_i``;
* the last symbol is eliminated with ``d_m = -(d_1 + ... + d_{m-1})``
  (boundary terms vanish);
* the kernel is averaged over permutations of identical fields.

With this, equality of functionals is plain dictionary equality.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Tuple

from . import kernel as kp
from .exact import I, ONE, ExactComplex, as_exact

__all__ = [
    "Field",
    "Factor",
    "Term",
    "Functional",
    "poisson_bracket",
    "charge_split",
]


class Field(enum.IntEnum):
    """Field labels, in canonical sort order."""

    PSI = 0
    PSI_STAR = 1
    PHI = 2
    PPHI = 3

    @property
    def conjugate(self) -> Field:
        if self is Field.PSI:
            return Field.PSI_STAR
        if self is Field.PSI_STAR:
            return Field.PSI
        return self

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {Field.PSI: "psi", Field.PSI_STAR: "psiStar", Field.PHI: "phi", Field.PPHI: "pphi"}

Fields = Tuple[Field, ...]

# weight of contracting (field in F, field in G) inside {F, G}
_CONTRACTION = {
    (Field.PSI, Field.PSI_STAR): -I,
    (Field.PSI_STAR, Field.PSI): I,
    (Field.PHI, Field.PPHI): ONE,
    (Field.PPHI, Field.PHI): -ONE,
}


@dataclass(frozen=True)
class Factor:
    field: Field
    momentum: int  # 1-based position in the owning term


@dataclass(frozen=True)
class Term:
    """One canonical integral monomial: ``coeff * int kernel * prod(factors)``."""

    coeff: ExactComplex
    factors: Tuple[Factor, ...]
    kernel: kp.Monomial

    @property
    def fields(self) -> Fields:
        return tuple(f.field for f in self.factors)

    @property
    def charge(self) -> int:
        return charge_of(self.fields)


def charge_of(fields: Fields) -> int:
    return sum(1 for f in fields if f is Field.PSI) - sum(1 for f in fields if f is Field.PSI_STAR)


# -- canonicalization -------------------------------------------------------


def _sort_permutation(fields: Fields) -> Tuple[Fields, Tuple[int, ...]]:
    order = sorted(range(len(fields)), key=lambda i: (fields[i], i))
    newpos = [0] * len(fields)
    for new, old in enumerate(order):
        newpos[old] = new
    return tuple(fields[i] for i in order), tuple(newpos)


@lru_cache(maxsize=None)
def _canon_sub(newpos: Tuple[int, ...]) -> kp.Substitution:
    n = len(newpos)
    if n == 0:
        return ()
    return kp.compose(kp.permutation_sub(newpos), kp.elimination_sub(n, n - 1))


@lru_cache(maxsize=None)
def _symmetry_subs(fields: Fields) -> Tuple[kp.Substitution, ...]:
    n = len(fields)
    blocks = [list(g) for _, g in itertools.groupby(range(n), key=lambda i: fields[i])]
    subs = []
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [0] * n
        for block, image in zip(blocks, choice):
            for src, dst in zip(block, image):
                perm[src] = dst
        subs.append(_canon_sub(tuple(perm)))
    return tuple(subs)


@lru_cache(maxsize=200_000)
def _symmetrized(fields: Fields, mono: kp.Monomial) -> Tuple[Tuple[kp.Monomial, ExactComplex], ...]:
    subs = _symmetry_subs(fields)
    if len(subs) == 1:
        return ((mono, ONE),)
    acc: kp.Poly = {}
    for sub in subs:
        kp.add_into(acc, kp.substitute({mono: ONE}, sub))
    w = ExactComplex(Fraction(1, len(subs)))
    return tuple((m, c * w) for m, c in acc.items())


def _symmetrize(fields: Fields, poly: kp.Poly) -> kp.Poly:
    out: kp.Poly = {}
    for m, c in poly.items():
        for m2, c2 in _symmetrized(fields, m):
            kp.add_into(out, {m2: c2}, c)
    return out


def canonical_term(fields: Fields, poly: kp.Poly) -> Tuple[Fields, kp.Poly]:
    """Canonical ``(fields, kernel)`` of ``int poly(d) prod(fields)`` in raw order."""
    sorted_fields, newpos = _sort_permutation(tuple(fields))
    reduced = kp.substitute(poly, _canon_sub(newpos))
    return sorted_fields, _symmetrize(sorted_fields, reduced)


# -- functional ---------------------------------------------------------------


class Functional:
    """Immutable canonical sum of integral monomials.

    Supports ``+``, ``-``, multiplication by exact scalars, equality and
    hashing. Build instances with :func:`kgwnf.algebra.parse.build` or from
    raw monomials with :meth:`from_raw`.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Dict[Fields, kp.Poly] | None = None):
        clean = {}
        for fields, poly in (data or {}).items():
            poly = {m: c for m, c in poly.items() if c}
            if poly:
                clean[tuple(fields)] = poly
        object.__setattr__(self, "_data", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Functional is immutable")

    @classmethod
    def zero(cls) -> Functional:
        return cls()

    @classmethod
    def from_raw(cls, items: Iterable[Tuple[Fields, kp.Poly]]) -> Functional:
        """Canonicalize raw ``(fields, kernel)`` pairs given in any factor order."""
        acc: Dict[Fields, kp.Poly] = {}
        for fields, poly in items:
            f, p = canonical_term(fields, poly)
            kp.add_into(acc.setdefault(f, {}), p)
        return cls(acc)

    @classmethod
    def monomial(cls, fields: Iterable[Field], coeff=1, kernel: kp.Poly | None = None) -> Functional:
        fields = tuple(fields)
        poly = kp.const(as_exact(coeff)) if kernel is None else kp.scale(kernel, as_exact(coeff))
        return cls.from_raw([(fields, poly)])

    # -- views ------------------------------------------------------------
    @property
    def data(self) -> Dict[Fields, kp.Poly]:
        return self._data

    def signatures(self) -> list:
        return sorted(self._data)

    def terms(self) -> list:
        out = []
        for fields in sorted(self._data):
            factors = tuple(Factor(f, i + 1) for i, f in enumerate(fields))
            for mono in sorted(self._data[fields]):
                out.append(Term(self._data[fields][mono], factors, mono))
        return out

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms())

    def __len__(self) -> int:
        return sum(len(p) for p in self._data.values())

    def is_zero(self) -> bool:
        return not self._data

    def __bool__(self):
        return bool(self._data)

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: Functional) -> Functional:
        if not isinstance(other, Functional):
            if other == 0:
                return self
            return NotImplemented
        acc = {f: dict(p) for f, p in self._data.items()}
        for f, p in other._data.items():
            kp.add_into(acc.setdefault(f, {}), p)
        return Functional(acc)

    __radd__ = __add__

    def __neg__(self) -> Functional:
        return Functional({f: kp.scale(p, -ONE) for f, p in self._data.items()})

    def __sub__(self, other: Functional) -> Functional:
        return self + (-other)

    def __mul__(self, c) -> Functional:
        try:
            c = as_exact(c)
        except TypeError:
            return NotImplemented
        return Functional({f: kp.scale(p, c) for f, p in self._data.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> Functional:
        return self * (ONE / as_exact(c))

    def __eq__(self, other) -> bool:
        if isinstance(other, Functional):
            return self._data == other._data
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            h = hash(frozenset((f, frozenset(p.items())) for f, p in self._data.items()))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def map_terms(self, fn) -> Functional:
        """Apply ``fn(fields, poly) -> (fields, poly) | None`` signature-wise."""
        acc: Dict[Fields, kp.Poly] = {}
        for f, p in self._data.items():
            res = fn(f, p)
            if res is None:
                continue
            for f2, p2 in res:
                kp.add_into(acc.setdefault(f2, {}), p2)
        return Functional(acc)

    def select(self, predicate) -> Functional:
        """Keep signatures whose field tuple satisfies ``predicate``."""
        return Functional({f: p for f, p in self._data.items() if predicate(f)})

    def conjugate(self) -> Functional:
        """Complex conjugate: swap psi and psiStar, conjugate coefficients."""
        items = []
        for f, p in self._data.items():
            items.append((tuple(x.conjugate for x in f), {m: c.conjugate() for m, c in p.items()}))
        return Functional.from_raw(items)

    def degree(self, field: Field) -> int:
        """Largest number of ``field`` factors in any term."""
        return max((f.count(field) for f in self._data), default=0)

    def charges(self) -> set:
        return {charge_of(f) for f in self._data}

    def __repr__(self):
        from .render import render

        return f"Functional({render(self)})"

    def __str__(self):
        from .render import render

        return render(self)


# -- Poisson bracket -----------------------------------------------------------


@lru_cache(maxsize=None)
def _contraction_subs(m: int, n: int, a: int, b: int) -> Tuple[kp.Substitution, kp.Substitution]:
    """Index maps for contracting factor ``a`` of an m-term with ``b`` of an n-term.

    The surviving factors are laid out as (A without a) + (B without b). The
    contracted symbols satisfy ``d_a = -(sum of A's other symbols)`` and
    ``d_b = -d_a``.
    """
    posA = {}
    k = 0
    for i in range(m):
        if i != a:
            posA[i] = k
            k += 1
    posB = {}
    for j in range(n):
        if j != b:
            posB[j] = k
            k += 1
    d_a = tuple((posA[i], -1) for i in range(m) if i != a)
    subA = tuple(d_a if i == a else ((posA[i], 1),) for i in range(m))
    minus_d_a = tuple((p, -c) for p, c in d_a)
    subB = tuple(minus_d_a if j == b else ((posB[j], 1),) for j in range(n))
    return subA, subB


def _bracket_signature(fa: Fields, pa: kp.Poly, fb: Fields, pb: kp.Poly, acc: Dict[Fields, kp.Poly]):
    m, n = len(fa), len(fb)
    for a, xa in enumerate(fa):
        for b, xb in enumerate(fb):
            w = _CONTRACTION.get((xa, xb))
            if w is None:
                continue
            subA, subB = _contraction_subs(m, n, a, b)
            raw_fields = fa[:a] + fa[a + 1:] + fb[:b] + fb[b + 1:]
            sorted_fields, newpos = _sort_permutation(raw_fields)
            canon = _canon_sub(newpos)
            qa = kp.substitute(pa, kp.compose(subA, canon))
            qb = kp.substitute(pb, kp.compose(subB, canon))
            prod = kp.mul(qa, qb)
            if not prod:
                continue
            kp.add_into(acc.setdefault(sorted_fields, {}), _symmetrize(sorted_fields, prod), w)


def poisson_bracket(F: Functional, G: Functional) -> Functional:
    """Canonical bracket ``{F, G}`` with ``{psi(x), psiStar(y)} = -i delta(x-y)``
    and ``{phi(x), pphi(y)} = delta(x-y)``."""
    acc: Dict[Fields, kp.Poly] = {}
    for fa, pa in F.data.items():
        for fb, pb in G.data.items():
            _bracket_signature(fa, pa, fb, pb, acc)
    return Functional(acc)


def lie(K: Functional):
    """Lie derivative ``L_K = {., K}`` as a callable."""

    def op(F: Functional) -> Functional:
        return poisson_bracket(F, K)

    return op


def charge_split(F: Functional) -> Dict[int, Functional]:
    """Partition of ``F`` by charge ``#psi - #psiStar``."""
    parts: Dict[int, dict] = {}
    for f, p in F.data.items():
        parts.setdefault(charge_of(f), {})[f] = p
    return {n: Functional(d) for n, d in sorted(parts.items())}


def factorial_weight(k: int) -> ExactComplex:
    return ExactComplex(Fraction(1, math.factorial(k)))
