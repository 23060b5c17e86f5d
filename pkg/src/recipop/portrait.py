"""Deterministic standalone SVG phase portraits.

Hand-rolled emitter: fixed float formatting and no timestamps or generated
ids, so identical inputs produce byte-identical files (the golden-file
contract of the command-line layer).
"""

from __future__ import annotations

import math

from .errors import DomainError

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_WIDTH = 640
_HEIGHT = 640
_MARGIN = 40.0


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_portrait(curves, rest_points=(), axis_labels=("x", "y")) -> str:
    """Render polyline curves and rest-point markers as an SVG document.

    curves: iterable of (N, 2) float arrays / sequences of (x, y) pairs.
    rest_points: iterable of (x, y) marker positions.
    """
    curves = [[(float(p[0]), float(p[1])) for p in c] for c in curves]
    rest_points = [(float(p[0]), float(p[1])) for p in rest_points]
    if not curves:
        raise DomainError("portrait needs at least one trajectory")

    pts = [p for c in curves for p in c] + list(rest_points) + [(0.0, 0.0)]
    finite = [(x, y) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
    if not finite:
        raise DomainError("no finite points to draw")
    x_lo = min(p[0] for p in finite)
    x_hi = max(p[0] for p in finite)
    y_lo = min(p[1] for p in finite)
    y_hi = max(p[1] for p in finite)
    pad_x = 0.05 * (x_hi - x_lo) or 1.0
    pad_y = 0.05 * (y_hi - y_lo) or 1.0
    x_lo, x_hi = x_lo - pad_x, x_hi + pad_x
    y_lo, y_hi = y_lo - pad_y, y_hi + pad_y

    sx = (_WIDTH - 2 * _MARGIN) / (x_hi - x_lo)
    sy = (_HEIGHT - 2 * _MARGIN) / (y_hi - y_lo)

    def px(x):
        return _MARGIN + (x - x_lo) * sx

    def py(y):
        return _HEIGHT - _MARGIN - (y - y_lo) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]

    # Coordinate axes through the origin (clipped to the frame).
    axis_style = 'stroke="#888888" stroke-width="1"'
    if x_lo <= 0.0 <= x_hi:
        x0 = _fmt(px(0.0))
        out.append(f'<line x1="{x0}" y1="{_fmt(py(y_lo))}" x2="{x0}" y2="{_fmt(py(y_hi))}" {axis_style}/>')
    if y_lo <= 0.0 <= y_hi:
        y0 = _fmt(py(0.0))
        out.append(f'<line x1="{_fmt(px(x_lo))}" y1="{y0}" x2="{_fmt(px(x_hi))}" y2="{y0}" {axis_style}/>')
    out.append(
        f'<rect x="{_fmt(_MARGIN)}" y="{_fmt(_MARGIN)}" width="{_fmt(_WIDTH - 2 * _MARGIN)}" '
        f'height="{_fmt(_HEIGHT - 2 * _MARGIN)}" fill="none" stroke="#444444" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{_fmt(_WIDTH - _MARGIN)}" y="{_fmt(_HEIGHT - _MARGIN / 4)}" '
        f'font-family="monospace" font-size="14" text-anchor="end">{axis_labels[0]}</text>'
    )
    out.append(
        f'<text x="{_fmt(_MARGIN / 4)}" y="{_fmt(_MARGIN)}" '
        f'font-family="monospace" font-size="14">{axis_labels[1]}</text>'
    )

    for i, curve in enumerate(curves):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{_fmt(px(x))},{_fmt(py(y))}"
            for x, y in curve
            if math.isfinite(x) and math.isfinite(y)
        )
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')

    for x, y in rest_points:
        out.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="4" fill="black" stroke="white" stroke-width="1"/>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
