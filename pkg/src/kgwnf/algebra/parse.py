"""Text grammar for field functionals.

EBNF (whitespace insignificant, ``*`` may be omitted between factors)::

    expr     = term { ("+" | "-") term } ;
    term     = [ "+" | "-" ] product ;
    product  = factor { [ "*" | "." | "/" ] factor } ;
    factor   = "int" product                 (* integral over the rest of the product *)
             | power ;
    power    = prefix [ "^" INTEGER ] ;
    prefix   = ( "lap" | "grad" | "d_" LETTER ) prefix
             | atom ;
    atom     = INTEGER | "i" | FIELD
             | "(" expr ")" | "|" expr "|" "^" EVEN
             | "conj" "(" expr ")" | "dot" "(" expr "," expr ")" ;
    FIELD    = "psi" | "psiStar" | "psibar" | "phi" | "pphi" | "p_phi" ;

Unicode aliases: ``∫`` int, ``Δ`` lap, ``∇`` grad, ``·`` dot product,
``ψ`` psi, ``ψ̄`` psiStar, ``φ`` phi, ``p_φ`` pphi, ``∂_a`` d_a.

Semantics: ``grad`` produces a vector; a product of two vectors is their dot
product and ``v^2 = v.v``. ``|x|^2`` means ``x * conj(x)`` and ``|x|^4 = (|x|^2)^2``. ``d_a`` marks an
explicit derivative index; every index letter must occur exactly twice in a
product and is summed (``d_a d_b psi * d_a phi * d_b phi``). Integration by
parts is implicit: equivalent integrals build identical functionals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from . import kernel as kp
from .exact import I, ONE, ExactComplex
from .functional import Field, Functional

__all__ = ["build", "ParseError"]


class ParseError(ValueError):
    """Malformed expression; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = ""
        if text:
            pointer = f"\n  {text}\n  {' ' * position}^"
        super().__init__(f"{message} at position {position}{pointer}")


_FIELDS = {
    "psi": Field.PSI,
    "ψ": Field.PSI,
    "psiStar": Field.PSI_STAR,
    "psistar": Field.PSI_STAR,
    "psibar": Field.PSI_STAR,
    "ψ̄": Field.PSI_STAR,
    "phi": Field.PHI,
    "φ": Field.PHI,
    "pphi": Field.PPHI,
    "p_phi": Field.PPHI,
    "p_φ": Field.PPHI,
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<dindex>(?:d_|∂_)[a-z])
  | (?P<name>p_phi|p_φ|ψ̄|ψ|φ|[A-Za-z][A-Za-z]*)
  | (?P<sym>∫|Δ|∇|·|[-+*/^().,|])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"int": "int", "∫": "int", "lap": "lap", "Δ": "lap", "grad": "grad", "∇": "grad"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> List[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tok = m.group()
        if kind == "ws":
            pass
        elif kind == "num":
            out.append(_Tok("num", tok, pos))
        elif kind == "dindex":
            out.append(_Tok("dindex", tok[-1], pos))
        elif kind == "name":
            if tok in _KEYWORDS:
                out.append(_Tok(_KEYWORDS[tok], tok, pos))
            elif tok in _FIELDS:
                out.append(_Tok("field", tok, pos))
            elif tok in ("i", "conj", "dot"):
                out.append(_Tok(tok, tok, pos))
            else:
                raise ParseError(f"unknown name {tok!r}", pos, text)
        else:
            if tok in _KEYWORDS:
                out.append(_Tok(_KEYWORDS[tok], tok, pos))
            elif tok == "·":
                out.append(_Tok(".", tok, pos))
            else:
                out.append(_Tok(tok, tok, pos))
        pos = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


# -- values ------------------------------------------------------------------
# Local term: (fields, kernel poly over 0..m-1, pending index pairs)
LT = Tuple[tuple, kp.Poly, tuple]
# Vector term: (fields, kernel poly, LinForm of the free gradient)
VT = Tuple[tuple, kp.Poly, kp.LinForm]


@dataclass
class Local:
    terms: List[LT]


@dataclass
class Vector:
    terms: List[VT]


def _shift(poly: kp.Poly, n: int, off: int) -> kp.Poly:
    if not off:
        return poly
    return kp.substitute(poly, tuple(((i + off, 1),) for i in range(n)))


def _contract_pending(fields, poly, pending, err):
    names = {}
    for name, p in pending:
        names.setdefault(name, []).append(p)
    rest = []
    for name, ps in names.items():
        if len(ps) == 2:
            poly = kp.mul(poly, kp.var(ps[0], ps[1]))
        elif len(ps) == 1:
            rest.append((name, ps[0]))
        else:
            err(f"index {name!r} used more than twice")
    return fields, poly, tuple(rest)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.abs_depth = 0

    # helpers --------------------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def err(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.tok.pos if pos is None else pos, self.text)

    def eat(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.err(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    # arithmetic on values -------------------------------------------------
    def as_local(self, v):
        if isinstance(v, ExactComplex):
            return Local([((), kp.const(v), ())])
        return v

    def add(self, a, b, pos):
        if isinstance(a, ExactComplex) and isinstance(b, ExactComplex):
            return a + b
        if isinstance(a, Functional) and isinstance(b, Functional):
            return a + b
        a, b = self.as_local(a), self.as_local(b)
        if isinstance(a, Local) and isinstance(b, Local):
            return Local(a.terms + b.terms)
        if isinstance(a, Vector) and isinstance(b, Vector):
            return Vector(a.terms + b.terms)
        self.err("cannot add " + _kind(a) + " and " + _kind(b), pos)

    def scale(self, v, c: ExactComplex):
        if isinstance(v, ExactComplex):
            return v * c
        if isinstance(v, Functional):
            return v * c
        if isinstance(v, Local):
            return Local([(f, kp.scale(p, c), q) for f, p, q in v.terms])
        return Vector([(f, kp.scale(p, c), l) for f, p, l in v.terms])

    def mul(self, a, b, pos):
        if isinstance(a, ExactComplex):
            return self.scale(b, a)
        if isinstance(b, ExactComplex):
            return self.scale(a, b)
        if isinstance(a, Functional) or isinstance(b, Functional):
            self.err("an integral can only be multiplied by a constant", pos)
        if isinstance(a, Vector) and isinstance(b, Local):
            a, b = b, a
        out_l, out_v = [], []
        if isinstance(a, Local) and isinstance(b, Local):
            for fa, pa, qa in a.terms:
                for fb, pb, qb in b.terms:
                    off = len(fa)
                    pend = qa + tuple((n, p + off) for n, p in qb)
                    term = (fa + fb, kp.mul(pa, _shift(pb, len(fb), off)), pend)
                    out_l.append(_contract_pending(*term, lambda m: self.err(m, pos)))
            return Local(out_l)
        if isinstance(a, Local) and isinstance(b, Vector):
            for fa, pa, qa in a.terms:
                if qa:
                    self.err("index notation cannot be mixed with grad", pos)
                for fb, pb, lb in b.terms:
                    off = len(fa)
                    lin = tuple((i + off, c) for i, c in lb)
                    out_v.append((fa + fb, kp.mul(pa, _shift(pb, len(fb), off)), lin))
            return Vector(out_v)
        # vector . vector
        for fa, pa, la in a.terms:
            for fb, pb, lb in b.terms:
                off = len(fa)
                lin_b = tuple((i + off, c) for i, c in lb)
                poly = kp.mul(kp.mul(pa, _shift(pb, len(fb), off)), kp.dot(la, lin_b))
                out_l.append((fa + fb, poly, ()))
        return Local(out_l)

    def conj(self, v):
        if isinstance(v, ExactComplex):
            return v.conjugate()
        if isinstance(v, Functional):
            return v.conjugate()

        def cp(p):
            return {m: c.conjugate() for m, c in p.items()}

        if isinstance(v, Local):
            return Local([(tuple(f.conjugate for f in fs), cp(p), q) for fs, p, q in v.terms])
        return Vector([(tuple(f.conjugate for f in fs), cp(p), l) for fs, p, l in v.terms])

    def power(self, v, n: int, pos):
        if n < 0:
            self.err("negative powers are not allowed", pos)
        if isinstance(v, ExactComplex):
            return v ** n
        if n == 0:
            return ONE
        out = v
        for _ in range(n - 1):
            out = self.mul(out, v, pos)
        return out

    def laplacian(self, v, pos):
        v = self.as_local(v)
        if not isinstance(v, Local):
            self.err("lap needs a scalar field expression", pos)
        out = []
        for f, p, q in v.terms:
            if q:
                self.err("lap of an expression with open indices", pos)
            n = len(f)
            everything = tuple((i, 1) for i in range(n))
            out.append((f, kp.mul(p, kp.dot(everything, everything)), q))
        return Local(out)

    def gradient(self, v, pos):
        v = self.as_local(v)
        if not isinstance(v, Local):
            self.err("grad needs a scalar field expression", pos)
        out = []
        for f, p, q in v.terms:
            if q:
                self.err("grad of an expression with open indices", pos)
            out.append((f, p, tuple((i, 1) for i in range(len(f)))))
        return Vector(out)

    def index_derivative(self, name: str, v, pos):
        v = self.as_local(v)
        if not isinstance(v, Local):
            self.err("index derivative needs a scalar field", pos)
        out = []
        for f, p, q in v.terms:
            if len(f) != 1:
                self.err("index derivatives apply to single fields only", pos)
            out.append(_contract_pending(f, p, q + ((name, 0),), lambda m: self.err(m, pos)))
        return Local(out)

    def integrate(self, v, pos):
        if isinstance(v, Functional):
            self.err("nested integral", pos)
        v = self.as_local(v)
        if isinstance(v, Vector):
            self.err("cannot integrate a vector", pos)
        items = []
        for f, p, q in v.terms:
            if q:
                self.err(f"unpaired derivative index {q[0][0]!r}", pos)
            items.append((f, p))
        return Functional.from_raw(items)

    # grammar --------------------------------------------------------------
    def parse(self):
        v = self.expr()
        if self.tok.kind != "eof":
            self.err(f"unexpected {self.tok.text!r}")
        return v

    def expr(self):
        pos = self.tok.pos
        v = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.eat(self.tok.kind)
            w = self.term()
            if op.kind == "-":
                w = self.scale(w, -ONE)
            v = self.add(v, w, op.pos)
        return v

    def term(self):
        sign = ONE
        while self.tok.kind in ("+", "-"):
            if self.eat(self.tok.kind).kind == "-":
                sign = -sign
        v = self.product()
        return v if sign == ONE else self.scale(v, sign)

    _STARTS = {"num", "i", "field", "(", "conj", "dot", "lap", "grad", "dindex", "int"}

    def product(self):
        v = self.factor()
        while True:
            k = self.tok.kind
            pos = self.tok.pos
            if k in ("*", "."):
                self.eat(k)
                v = self.mul(v, self.factor(), pos)
            elif k == "/":
                self.eat("/")
                d = self.factor()
                if not isinstance(d, ExactComplex):
                    self.err("division by a non-constant", pos)
                if not d:
                    self.err("division by zero", pos)
                v = self.scale(v, ONE / d)
            elif k in self._STARTS or (k == "|" and self.abs_depth == 0):
                v = self.mul(v, self.factor(), pos)
            else:
                return v

    def factor(self):
        if self.tok.kind == "int":
            pos = self.eat("int").pos
            return self.integrate(self.product(), pos)
        return self.power_()

    def power_(self):
        v = self.prefix()
        if self.tok.kind == "^":
            pos = self.eat("^").pos
            n = int(self.eat("num").text)
            v = self.power(v, n, pos)
        return v

    def prefix(self):
        t = self.tok
        if t.kind == "lap":
            self.eat("lap")
            return self.laplacian(self.prefix(), t.pos)
        if t.kind == "grad":
            self.eat("grad")
            return self.gradient(self.prefix(), t.pos)
        if t.kind == "dindex":
            self.eat("dindex")
            return self.index_derivative(t.text, self.prefix(), t.pos)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.eat("num")
            return ExactComplex(Fraction(int(t.text)))
        if t.kind == "i":
            self.eat("i")
            return I
        if t.kind == "field":
            self.eat("field")
            return Local([((_FIELDS[t.text],), kp.const(ONE), ())])
        if t.kind == "(":
            self.eat("(")
            saved, self.abs_depth = self.abs_depth, 0
            v = self.expr()
            self.abs_depth = saved
            self.eat(")")
            return v
        if t.kind == "|":
            self.eat("|")
            self.abs_depth += 1
            v = self.expr()
            self.abs_depth -= 1
            self.eat("|")
            nxt = self.toks[self.i + 1]
            if self.tok.kind != "^" or nxt.kind != "num" or int(nxt.text) % 2 or int(nxt.text) == 0:
                self.err("|x| must carry an even power, as in |x|^2")
            self.eat("^")
            n = int(self.eat("num").text)
            return self.power(self.mul(v, self.conj(v), t.pos), n // 2, t.pos)
        if t.kind == "conj":
            self.eat("conj")
            self.eat("(")
            v = self.expr()
            self.eat(")")
            return self.conj(v)
        if t.kind == "dot":
            self.eat("dot")
            self.eat("(")
            a = self.expr()
            self.eat(",")
            b = self.expr()
            self.eat(")")
            if not (isinstance(a, Vector) and isinstance(b, Vector)):
                self.err("dot needs two gradient expressions", t.pos)
            return self.mul(a, b, t.pos)
        self.err(f"unexpected {t.text or 'end of input'!r}")


def _kind(v) -> str:
    return {ExactComplex: "constant", Local: "field expression", Vector: "vector", Functional: "integral"}[type(v)]


def build(text: str) -> Functional:
    """Parse ``text`` into a canonical :class:`Functional`.

    >>> build("int |grad psi|^2") == build("-int psiStar * lap psi")
    True
    """
    value = _Parser(text).parse()
    if isinstance(value, ExactComplex) and not value:
        return Functional.zero()
    if not isinstance(value, Functional):
        raise ParseError("expression is not an integral; wrap it in int(...)", 0, text)
    return value
