"""Self-contained SVG scatter plots of 2-D embeddings, one glyph per class."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .dataset import LABELS

WIDTH, HEIGHT = 720, 540
PLOT_LEFT, PLOT_TOP, PLOT_RIGHT, PLOT_BOTTOM = 60, 40, 560, 500
GLYPH = 4.0

STYLE = {
    "N": ("circle", "#1f77b4"),
    "C": ("square", "#ff7f0e"),
    "IT": ("triangle-up", "#2ca02c"),
    "DT": ("triangle-down", "#d62728"),
    "US": ("diamond", "#9467bd"),
    "DS": ("cross", "#8c564b"),
    None: ("circle", "#7f7f7f"),
}


def _glyph(shape: str, x: float, y: float, color: str, cls: str, r: float = GLYPH) -> str:
    if shape == "circle":
        return f'<circle class="{cls}" cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="{color}"/>'
    if shape == "square":
        return f'<rect class="{cls}" x="{x - r:.2f}" y="{y - r:.2f}" width="{2 * r:.2f}" height="{2 * r:.2f}" fill="{color}"/>'
    if shape == "triangle-up":
        pts = [(x, y - r), (x + r, y + r), (x - r, y + r)]
    elif shape == "triangle-down":
        pts = [(x, y + r), (x + r, y - r), (x - r, y - r)]
    elif shape == "diamond":
        pts = [(x, y - r), (x + r, y), (x, y + r), (x - r, y)]
    elif shape == "cross":
        d = (
            f"M{x - r:.2f},{y:.2f}L{x + r:.2f},{y:.2f}"
            f"M{x:.2f},{y - r:.2f}L{x:.2f},{y + r:.2f}"
        )
        return f'<path class="{cls}" d="{d}" stroke="{color}" stroke-width="2" fill="none"/>'
    else:
        raise ValueError(f"unknown glyph {shape!r}")
    points = " ".join(f"{px:.2f},{py:.2f}" for px, py in pts)
    return f'<polygon class="{cls}" points="{points}" fill="{color}"/>'


def _axis_range(v: np.ndarray) -> tuple[float, float]:
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo
    if span == 0:
        span = max(abs(lo), 1.0)
        lo, hi = lo - span / 2, hi + span / 2
        span = hi - lo
    return lo - 0.05 * span, hi + 0.05 * span


def scatter_svg(coords, labels, title: str = "") -> str:
    """Render points with class glyphs; the legend lists only classes present."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] == 0:
        raise ValueError("expected an (n, d) coordinate array")
    if len(labels) != coords.shape[0]:
        raise ValueError(f"{len(labels)} labels for {coords.shape[0]} points")
    xs = coords[:, 0]
    ys = coords[:, 1] if coords.shape[1] > 1 else np.zeros_like(xs)
    x0, x1 = _axis_range(xs)
    y0, y1 = _axis_range(ys)

    def sx(v):
        return PLOT_LEFT + (v - x0) / (x1 - x0) * (PLOT_RIGHT - PLOT_LEFT)

    def sy(v):
        return PLOT_BOTTOM - (v - y0) / (y1 - y0) * (PLOT_BOTTOM - PLOT_TOP)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect class="frame" x="{PLOT_LEFT}" y="{PLOT_TOP}" width="{PLOT_RIGHT - PLOT_LEFT}" '
        f'height="{PLOT_BOTTOM - PLOT_TOP}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{PLOT_LEFT}" y="{PLOT_TOP - 14}" font-size="14">{escape(title)}</text>')
    for v, anchor in ((x0, "start"), (x1, "end")):
        out.append(
            f'<text class="tick" x="{sx(v):.2f}" y="{PLOT_BOTTOM + 16}" font-size="10" text-anchor="{anchor}">{v:.3g}</text>'
        )
    for v, dy in ((y0, 0), (y1, 10)):
        out.append(
            f'<text class="tick" x="{PLOT_LEFT - 4}" y="{sy(v) + dy:.2f}" font-size="10" text-anchor="end">{v:.3g}</text>'
        )

    out.append('<g class="points">')
    for x, y, label in zip(xs.tolist(), ys.tolist(), labels):
        shape, color = STYLE.get(label, STYLE[None])
        out.append(_glyph(shape, sx(x), sy(y), color, f"point {label or 'unlabelled'}"))
    out.append("</g>")

    present = [lab for lab in LABELS if lab in set(labels)]
    if any(lab not in LABELS for lab in labels):
        present.append(None)
    out.append('<g class="legend">')
    for row, label in enumerate(present):
        y = PLOT_TOP + 10 + 22 * row
        shape, color = STYLE[label]
        out.append(_glyph(shape, PLOT_RIGHT + 30, y, color, "legend-glyph", r=5))
        text = label if label is not None else "unlabelled"
        out.append(f'<text class="legend-entry" x="{PLOT_RIGHT + 44}" y="{y + 4:.2f}" font-size="12">{text}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
