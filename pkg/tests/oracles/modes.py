"""Finite Fourier-mode oracle for field functionals.

Fields on a periodic box are expanded as

    psi = sum z_k e^{ik.x},   psiStar = sum w_k e^{-ik.x},
    phi = sum q_k e^{ik.x},   pphi    = sum p_k e^{-ik.x},

so an integral monomial becomes a polynomial in the mode variables, with
each derivative contraction ``d_i . d_j`` replaced by ``-kappa_i . kappa_j``
(``kappa`` the signed wave vector of factor ``i``) and the integral imposing
``sum kappa = 0``. Dividing by the box volume, the field bracket
``{psi(x), psiStar(y)} = -i delta`` becomes ``{z_k, w_k} = -i`` and
``{q_k, p_k} = 1``.

Only the external modes appear in a compared result, but a bracket contracts
one factor of each operand over every wave vector. Evaluating each operand on
all mode tuples with at most one non-external factor covers every contraction
that can land back on external monomials, so the comparison is exact.

Polynomials live in sympy's sparse ring over the Gaussian rationals; nothing
here touches the package's kernel arithmetic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import ring

PSI, PSI_STAR, PHI, PPHI = 0, 1, 2, 3
_SIGN = {PSI: 1, PSI_STAR: -1, PHI: 1, PPHI: -1}


def _q(x: Fraction):
    return QQ(x.numerator, x.denominator)


class ModeTruncation:
    """Mode variables for a set of external wave vectors in ``dim`` dimensions."""

    def __init__(self, external, max_factors: int = 6):
        self.external = [tuple(k) for k in external]
        self.dim = len(self.external[0])
        ext_set = set(self.external)
        # every wave vector reachable as a signed sum of up to max_factors - 1 externals
        modes = {tuple(0 for _ in range(self.dim))} | ext_set
        frontier = set(modes)
        signed = [k for k in self.external] + [tuple(-c for c in k) for k in self.external]
        for _ in range(max_factors - 1):
            nxt = set()
            for a in frontier:
                for b in signed:
                    nxt.add(tuple(x + y for x, y in zip(a, b)))
            modes |= nxt
            frontier = nxt
        self.modes = sorted(modes)
        self.ext_set = ext_set
        names = []
        for f, letter in ((PSI, "z"), (PSI_STAR, "w"), (PHI, "q"), (PPHI, "p")):
            for k in self.modes:
                names.append(f"{letter}_{f}_" + "_".join(str(c) for c in k))
        self.ring, *gens = ring(",".join(names), QQ_I)
        self._index = {}
        i = 0
        for f in (PSI, PSI_STAR, PHI, PPHI):
            for k in self.modes:
                self._index[(f, k)] = gens[i]
                i += 1
        self.ext_gens = {self._index[(f, k)] for f in range(4) for k in self.external}

    def var(self, field: int, k):
        return self._index[(field, tuple(k))]

    # -- evaluation -----------------------------------------------------------
    def evaluate(self, F, external_only: bool = False):
        """Mode polynomial of a :class:`Functional` (read through its data)."""
        out = self.ring.zero
        for fields, poly in F.data.items():
            fields = [int(f) for f in fields]
            m = len(fields)
            signs = [_SIGN[f] for f in fields]
            for ks in self._conserving(signs, external_only):
                kappa = [tuple(s * c for c in k) for s, k in zip(signs, ks)]
                coeff = QQ_I(0, 0)
                for mono, c in poly.items():
                    val = QQ_I(_q(c.re), _q(c.im))
                    for i, j in mono:
                        val = val * QQ_I(-sum(a * b for a, b in zip(kappa[i], kappa[j])), 0)
                    coeff = coeff + val
                if not coeff:
                    continue
                term = self.ring(coeff)
                for f, k in zip(fields, ks):
                    term = term * self._index[(f, k)]
                out = out + term
        return out

    def _conserving(self, signs, external_only: bool):
        m = len(signs)
        seen = set()
        if m == 0:
            return [()]
        ext = self.external
        if external_only:
            for ks in itertools.product(ext, repeat=m - 1):
                last = self._close(signs, ks)
                if last in self.ext_set:
                    seen.add(ks + (last,))
            return sorted(seen)
        for free in range(m):
            others = [i for i in range(m) if i != free]
            for ks in itertools.product(ext, repeat=m - 1):
                assign = dict(zip(others, ks))
                total = [0] * self.dim
                for i, k in assign.items():
                    for d in range(self.dim):
                        total[d] += signs[i] * k[d]
                # signs[free] * k_free = -total
                k_free = tuple(-signs[free] * t for t in total)
                if k_free not in self._index_modes():
                    continue
                assign[free] = k_free
                seen.add(tuple(assign[i] for i in range(m)))
        return sorted(seen)

    def _close(self, signs, ks):
        total = [0] * self.dim
        for s, k in zip(signs, ks):
            for d in range(self.dim):
                total[d] += s * k[d]
        return tuple(-signs[-1] * t for t in total)

    def _index_modes(self):
        if not hasattr(self, "_mode_set"):
            self._mode_set = set(self.modes)
        return self._mode_set

    # -- finite-dimensional structure -------------------------------------------
    def bracket(self, A, B):
        """Canonical bracket with ``{z_k, w_k} = -i`` and ``{q_k, p_k} = 1``."""
        out = self.ring.zero
        mi = QQ_I(0, -1)
        for k in self.modes:
            z, w = self._index[(PSI, k)], self._index[(PSI_STAR, k)]
            q, p = self._index[(PHI, k)], self._index[(PPHI, k)]
            out += mi * (A.diff(z) * B.diff(w) - A.diff(w) * B.diff(z))
            out += A.diff(q) * B.diff(p) - A.diff(p) * B.diff(q)
        return out

    def restrict(self, P):
        """Drop monomials containing any non-external variable."""
        gens = self.ring.gens
        keep_idx = [i for i, g in enumerate(gens) if g in self.ext_gens]
        drop = [i for i in range(len(gens)) if i not in keep_idx]
        out = self.ring.zero
        for monom, c in P.terms():
            if all(monom[i] == 0 for i in drop):
                out += self.ring({monom: c})
        return out

    def h_average(self, P):
        """Average along ``z -> z e^{-is}, w -> w e^{is}``: keep balanced monomials."""
        zi = [self.ring.gens.index(self._index[(PSI, k)]) for k in self.modes]
        wi = [self.ring.gens.index(self._index[(PSI_STAR, k)]) for k in self.modes]
        out = self.ring.zero
        for monom, c in P.terms():
            if sum(monom[i] for i in zi) == sum(monom[i] for i in wi):
                out += self.ring({monom: c})
        return out
