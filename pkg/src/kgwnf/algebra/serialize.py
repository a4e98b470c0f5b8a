"""JSON-compatible encoding of functionals with exact ``"p/q"`` coefficients."""

from __future__ import annotations

from .exact import ExactComplex
from .functional import Field, Functional
from .render import render

__all__ = ["functional_to_json", "functional_from_json"]


def functional_to_json(F: Functional) -> dict:
    """Encode ``F`` as ``{"text": ..., "terms": [...]}``.

    Each term lists its fields, the kernel monomial as pairs ``[i, j]`` of
    0-based factor positions (``d_i . d_j``), and the exact coefficient.
    """
    terms = []
    for fields in sorted(F.data):
        for mono in sorted(F.data[fields]):
            terms.append({
                "fields": [f.label for f in fields],
                "kernel": [list(v) for v in mono],
                "coeff": F.data[fields][mono].to_json(),
            })
    return {"text": render(F), "terms": terms}


def functional_from_json(data: dict) -> Functional:
    by_label = {f.label: f for f in Field}
    items = []
    for t in data["terms"]:
        fields = tuple(by_label[x] for x in t["fields"])
        mono = tuple(sorted(tuple(v) for v in t["kernel"]))
        items.append((fields, {mono: ExactComplex.from_json(t["coeff"])}))
    # terms are already canonical; rebuild directly to keep them bit-identical
    acc = {}
    for fields, poly in items:
        acc.setdefault(fields, {}).update(poly)
    return Functional(acc)
