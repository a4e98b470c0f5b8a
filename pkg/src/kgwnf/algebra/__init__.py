"""Exact field functionals, their canonical Poisson bracket, and a text grammar."""

from .exact import ExactComplex, I
from .functional import Factor, Field, Functional, Term, charge_split, lie, poisson_bracket
from .parse import ParseError, build
from .render import render, render_latex
from .serialize import functional_from_json, functional_to_json

pretty_print = render

__all__ = [
    "ExactComplex",
    "I",
    "Factor",
    "Field",
    "Functional",
    "Term",
    "charge_split",
    "lie",
    "poisson_bracket",
    "ParseError",
    "build",
    "render",
    "render_latex",
    "pretty_print",
    "functional_to_json",
    "functional_from_json",
]
