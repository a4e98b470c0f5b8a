"""Minimal static SVG line plots (no plotting library needed)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, Sequence, Tuple

__all__ = ["line_plot"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
W, H, PAD = 640, 420, 60


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        return [float(k) for k in range(a, b + 1)]
    step = (hi - lo) / 5 or 1.0
    return [lo + k * step for k in range(6)]


def line_plot(path, series: Dict[str, Tuple[Sequence[float], Sequence[float]]], title: str = "",
              xlabel: str = "", ylabel: str = "", loglog: bool = False) -> Path:
    """Write one SVG with a polyline and markers per series."""
    tf = (lambda v: math.log10(v)) if loglog else (lambda v: v)
    pts = {k: [(tf(x), tf(y)) for x, y in zip(*xy) if (not loglog or (x > 0 and y > 0))]
           for k, xy in series.items()}
    allx = [p[0] for v in pts.values() for p in v] or [0.0, 1.0]
    ally = [p[1] for v in pts.values() for p in v] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    if loglog:
        x0, x1, y0, y1 = math.floor(x0), math.ceil(x1), math.floor(y0), math.ceil(y1)

    def sx(v):
        return PAD + (v - x0) / (x1 - x0) * (W - 2 * PAD)

    def sy(v):
        return H - PAD - (v - y0) / (y1 - y0) * (H - 2 * PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
           f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
           f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
           f'<text x="{W / 2}" y="{H - 15}" text-anchor="middle">{xlabel}</text>',
           f'<text x="15" y="{H / 2}" transform="rotate(-90 15 {H / 2})" text-anchor="middle">{ylabel}</text>']
    for t in _ticks(x0, x1, loglog):
        lab = f"1e{int(t)}" if loglog else f"{t:.3g}"
        out.append(f'<text x="{sx(t):.1f}" y="{H - PAD + 16}" text-anchor="middle">{lab}</text>')
    for t in _ticks(y0, y1, loglog):
        lab = f"1e{int(t)}" if loglog else f"{t:.3g}"
        out.append(f'<text x="{PAD - 6}" y="{sy(t) + 4:.1f}" text-anchor="end">{lab}</text>')
    for i, (name, p) in enumerate(pts.items()):
        col = _COLORS[i % len(_COLORS)]
        if p:
            poly = " ".join(f"{sx(a):.1f},{sy(b):.1f}" for a, b in p)
            out.append(f'<polyline points="{poly}" fill="none" stroke="{col}" stroke-width="1.5"/>')
            if len(p) <= 50:
                out += [f'<circle cx="{sx(a):.1f}" cy="{sy(b):.1f}" r="3" fill="{col}"/>' for a, b in p]
        out.append(f'<text x="{W - PAD - 5}" y="{PAD + 16 * (i + 1)}" text-anchor="end" fill="{col}">{name}</text>')
    out.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(out) + "\n")
    return path
