"""Rendering of normal-form results with checks against stored references."""

from __future__ import annotations

import json
from typing import Dict, List, Optional

from ..algebra import Functional, functional_to_json, render
from ..normalform import normal_form, reference
from ..normalform.reference import available

__all__ = ["report_normal_form", "reference_diff", "REFERENCE_ORDER", "NO_REFERENCE"]

# highest order with stored reference expressions
REFERENCE_ORDER = 2
# flag for expressions beyond the stored references
NO_REFERENCE = "no paper reference"


def reference_diff(name: str, value: Functional) -> dict:
    """``{"name", "status", "difference"}`` with status ``match`` or ``mismatch``;
    ``difference`` is ``value - reference`` rendered as text."""
    ref = reference(name)
    diff = value - ref
    return {"name": name, "status": "match" if diff.is_zero() else "mismatch",
            "difference": render(diff)}


def _collect(order: int):
    res = normal_form(order)
    items: List[dict] = []
    for j in range(1, order + 1):
        for label, val in ((f"Z{j}", res.Z(j)), (f"G{j}", res.G(j))):
            entry = {"name": label, "value": val}
            if j <= REFERENCE_ORDER and label in available():
                entry["reference"] = reference_diff(label, val)
            else:
                entry["reference"] = None
            items.append(entry)
        if j == 2 and "F2" in available():
            items.append({"name": "F2", "value": res.F[1], "reference": reference_diff("F2", res.F[1])})
    checks = {
        "residuals_zero": [r.is_zero() for r in res.residuals],
        "commutes_with_h": res.commutes_with_h(),
        "generator_average_zero": res.generators_zero_average(),
    }
    return res, items, checks


def report_normal_form(order: int, fmt: str = "text") -> str:
    """Document listing ``Z_j``, ``G_j`` and residual verdicts up to ``order``.

    Parameters
    ----------
    fmt : {"text", "unicode", "latex", "json"}
        ``json`` is a structured document with exact coefficients as
        ``"p/q"`` strings. Expressions with stored references (orders 1 and
        2) carry a ``match``/``mismatch`` verdict; higher orders carry the
        :data:`NO_REFERENCE` flag.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if fmt not in ("text", "unicode", "latex", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    res, items, checks = _collect(order)
    if fmt == "json":
        doc = {
            "order": order,
            "checks": checks,
            "expressions": [
                {"name": it["name"], **functional_to_json(it["value"]),
                 "reference": (it["reference"]["status"] if it["reference"] else NO_REFERENCE)}
                for it in items
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    style = "latex" if fmt == "latex" else fmt
    lines = []
    if fmt == "latex":
        lines.append(r"\begin{align*}")
        for it in items:
            tag = it["reference"]["status"] if it["reference"] else NO_REFERENCE
            name = it["name"][0] + "_{" + it["name"][1:] + "}"
            lines.append(rf"{name} &= {render(it['value'], style)} && \text{{{tag}}}\\")
        lines.append(r"\end{align*}")
    else:
        for it in items:
            lines.append(f"{it['name']} = {render(it['value'], style)}")
            ref = it["reference"]
            if ref is None:
                lines.append(f"  reference: {NO_REFERENCE}")
            elif ref["status"] == "match":
                lines.append("  reference: match")
            else:
                lines.append(f"  reference: MISMATCH, difference {ref['difference']}")
    lines.append("")
    for key, vals in checks.items():
        verdict = ", ".join(f"j={j + 1}: {'ok' if v else 'FAIL'}" for j, v in enumerate(vals))
        lines.append(("% " if fmt == "latex" else "") + f"{key}: {verdict}")
    return "\n".join(lines) + "\n"
