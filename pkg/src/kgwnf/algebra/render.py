"""Deterministic text and LaTeX rendering of functionals.

The ``text`` style is accepted back by :func:`kgwnf.algebra.parse.build`.
For display, each signature is rewritten with the integration-by-parts
representative that needs the fewest summands, preferring Laplacians and
gradient pairings over explicit derivative indices.
"""

from __future__ import annotations

import string
from typing import List, Tuple

from . import kernel as kp
from .exact import ExactComplex, format_exact
from .functional import Field, Functional

__all__ = ["render", "render_latex"]

_TEXT = {Field.PSI: "psi", Field.PSI_STAR: "psiStar", Field.PHI: "phi", Field.PPHI: "pphi"}
_UNICODE = {Field.PSI: "ψ", Field.PSI_STAR: "ψ̄", Field.PHI: "φ", Field.PPHI: "p_φ"}
_LATEX = {Field.PSI: r"\psi", Field.PSI_STAR: r"\psi^*", Field.PHI: r"\phi", Field.PPHI: r"p_\phi"}


def _display_poly(fields, poly: kp.Poly) -> kp.Poly:
    """Representative of ``poly`` (stored with the last symbol eliminated) that
    renders with the fewest summands and cross contractions."""
    n = len(fields)
    if n <= 1:
        return poly
    best, best_key = poly, None
    for drop in range(n - 1, -1, -1):
        cand = kp.substitute(poly, kp.elimination_sub(n, drop))
        cross = sum(1 for m in cand for i, j in m if i != j)
        key = (len(cand), cross, drop != n - 1)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def _two_factor(fields, mono: kp.Monomial) -> Tuple[int, List[int], List[Tuple[int, int]]] | None:
    """Balance a pure Laplacian power on a two-factor term: int f lap^k g."""
    if len(fields) != 2 or not mono or any(i != j for i, j in mono):
        return None
    counts = [sum(1 for v in mono if v[0] == k) for k in range(2)]
    total = sum(counts)
    if total % 2 == 0:
        return 1, [total // 2, total // 2], []
    # odd power: one gradient pairing, sign (-1) from moving a Laplacian
    half = (total - 1) // 2
    return -1, [half, half], [(0, 1)]


def _structure(fields, mono: kp.Monomial):
    """Split a monomial into per-factor Laplacian powers and pairings."""
    laps = [0] * len(fields)
    pairs = []
    for i, j in mono:
        if i == j:
            laps[i] += 1
        else:
            pairs.append((i, j))
    return laps, pairs


def _factor_strings(fields, mono, names, lap, grad_dot, idx_fmt):
    two = _two_factor(fields, mono)
    sign = 1
    if two is not None:
        sign, laps, pairs = two
    else:
        laps, pairs = _structure(fields, mono)
    used = [0] * len(fields)
    for i, j in pairs:
        used[i] += 1
        used[j] += 1
    simple_pairs = all(u <= 1 for u in used)
    pieces = []
    if simple_pairs:
        paired = set()
        for i, j in pairs:
            pieces.append(grad_dot(lap(names[fields[i]], laps[i]), lap(names[fields[j]], laps[j])))
            paired.update((i, j))
        # identical fields are interchangeable: list heavier Laplacians first
        rest = sorted((k for k in range(len(fields)) if k not in paired), key=lambda k: (fields[k], -laps[k]))
        for k in rest:
            pieces.append(lap(names[fields[k]], laps[k]))
    else:
        letters = iter(string.ascii_lowercase)
        idx = [[] for _ in fields]
        for i, j in pairs:
            a = next(letters)
            idx[i].append(a)
            idx[j].append(a)
        for k, f in enumerate(fields):
            pieces.append(idx_fmt(idx[k], lap(names[f], laps[k])))
    return sign, pieces


def _coeff_text(c: ExactComplex, first: bool) -> Tuple[str, str]:
    """(separator, magnitude) with the sign folded into the separator."""
    s = format_exact(c)
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if first:
        sep = "-" if neg else ""
    else:
        sep = " - " if neg else " + "
    return sep, s


def _iter_display(F: Functional):
    for fields in sorted(F.data):
        poly = _display_poly(fields, F.data[fields])
        for mono in sorted(poly, key=lambda m: (len(m), m)):
            yield fields, mono, poly[mono]


def render(F: Functional, style: str = "text") -> str:
    """Render ``F``; ``style`` is ``"text"`` (ASCII, parseable), ``"unicode"``
    (Laplacian form with ∫, Δ, ∇; also parseable) or ``"latex"``."""
    if style == "latex":
        return render_latex(F)
    if style not in ("text", "unicode", "laplacian-form"):
        raise ValueError(f"unknown style {style!r}")
    uni = style != "text"
    names = _UNICODE if uni else _TEXT
    integral = "∫" if uni else "int"
    lap_sym = "Δ" if uni else "lap "
    grad_sym = "∇" if uni else "grad "
    dot_sym = "·" if uni else " . "
    d_sym = "∂_" if uni else "d_"

    def lap(name, k):
        return lap_sym * k + name

    def grad_dot(a, b):
        return f"({grad_sym}{a}{dot_sym}{grad_sym}{b})"

    def idx_fmt(ix, body):
        return "".join(f"{d_sym}{a} " for a in ix) + body

    if F.is_zero():
        return "0"
    parts = []
    for body, c in _merged(F, names, lap, grad_dot, idx_fmt, " * "):
        sep, mag = _coeff_text(c, not parts)
        coef = "" if mag == "1" else f"{mag} "
        parts.append(f"{sep}{coef}{integral} {body}")
    return "".join(parts) or "0"


def _merged(F, names, lap, grad_dot, idx_fmt, joiner):
    """(body, coefficient) pairs in display order, merging equal bodies."""
    acc = {}
    for fields, mono, c in _iter_display(F):
        sign, pieces = _factor_strings(fields, mono, names, lap, grad_dot, idx_fmt)
        body = joiner.join(pieces) if pieces else "1"
        c = -c if sign < 0 else c
        acc[body] = acc[body] + c if body in acc else c
    return [(b, c) for b, c in acc.items() if c]


def render_latex(F: Functional) -> str:
    if F.is_zero():
        return "0"

    def lap(name, k):
        if k == 0:
            return name
        op = r"\Delta" if k == 1 else rf"\Delta^{{{k}}}"
        return rf"{op} {name}"

    def grad_dot(a, b):
        return rf"(\nabla {a} \cdot \nabla {b})"

    def idx_fmt(ix, body):
        return "".join(rf"\partial_{a} " for a in ix) + body

    parts = []
    for body, c in _merged(F, _LATEX, lap, grad_dot, idx_fmt, " "):
        sep, mag = _coeff_text(c, not parts)
        coef = "" if mag == "1" else _latex_coeff(mag) + " "
        parts.append(rf"{sep}{coef}\int {body}")
    return "".join(parts) or "0"


def _latex_coeff(mag: str) -> str:
    if mag.startswith("("):
        return mag
    if "/" in mag:
        num, den = mag.split("/")
        return rf"\frac{{{num}}}{{{den}}}"
    return mag

