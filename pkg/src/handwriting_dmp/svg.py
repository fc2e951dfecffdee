"""Deterministic SVG renderings of trajectories and sweep reports."""

from __future__ import annotations

from html import escape
from typing import Sequence

import numpy as np

DEMO_COLOR = "#d62728"
REPRO_COLOR = "#1f77b4"
PALETTE = (DEMO_COLOR, REPRO_COLOR, "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
MARGIN = 0.05


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _points(xy: np.ndarray) -> str:
    return " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in xy)


def _header(width: int, height: int) -> list:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def _polyline(xy, color, label, width=1.5) -> str:
    return (f'<polyline class="curve" data-label="{escape(label)}" fill="none" stroke="{color}" '
            f'stroke-width="{width}" points="{_points(xy)}"/>')


def render_trajectories(curves: Sequence, labels: Sequence[str] | None = None,
                        colors: Sequence[str] | None = None, width: int = 480,
                        height: int = 480) -> str:
    """Overlay trajectories as polylines.

    Each curve is an (M, n_dofs) position array. Two or more DoFs are
    drawn as the (first, second) DoF pair with equal axis scaling; a single
    DoF is drawn against sample time. The first curve defaults to the
    demonstration color, the second to the reproduction color.
    """
    if not curves:
        raise ValueError("nothing to plot")
    arrays = []
    for c in curves:
        a = np.asarray(getattr(c, "positions", c), dtype=float)
        if a.ndim == 1:
            a = a[:, None]
        if a.size == 0:
            raise ValueError("empty trajectory")
        if a.shape[1] == 1:
            a = np.column_stack([np.linspace(0.0, 1.0, len(a)), a[:, 0]])
        arrays.append(a[:, :2])
    labels = list(labels or [f"curve {k}" for k in range(len(arrays))])
    colors = list(colors or [PALETTE[k % len(PALETTE)] for k in range(len(arrays))])

    stacked = np.vstack(arrays)
    lo, hi = stacked.min(axis=0), stacked.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    lo, hi = lo - MARGIN * span, hi + MARGIN * span
    scale = min(width / (hi[0] - lo[0]), height / (hi[1] - lo[1]))
    off = np.array([(width - scale * (hi[0] - lo[0])) / 2, (height - scale * (hi[1] - lo[1])) / 2])

    lines = _header(width, height)
    for a, lab, col in zip(arrays, labels, colors):
        px = off[0] + scale * (a[:, 0] - lo[0])
        py = height - (off[1] + scale * (a[:, 1] - lo[1]))
        lines.append(_polyline(np.column_stack([px, py]), col, lab))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_report(report, width: int = 640, height: int = 400) -> str:
    """Error-vs-axis curves of a sweep report, one polyline per letter.

    Swept values are placed at evenly spaced ticks labelled with the input
    values; errors use a linear scale. NaN cells break the polyline.
    """
    axis = list(report.axis)
    if not axis or not report.letters:
        raise ValueError("empty report")
    errors = np.asarray(report.errors, dtype=float)
    finite = errors[np.isfinite(errors)]
    e_lo, e_hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if e_hi <= e_lo:
        e_hi = e_lo + 1.0
    left, right, top, bottom = 70, width - 20, 20, height - 50
    inner_w, inner_h = right - left, bottom - top
    n = len(axis)
    xs = [left + inner_w * (MARGIN + (1 - 2 * MARGIN) * (k / (n - 1) if n > 1 else 0.5))
          for k in range(n)]

    def ypix(e):
        return bottom - inner_h * (MARGIN + (1 - 2 * MARGIN) * (e - e_lo) / (e_hi - e_lo))

    lines = _header(width, height)
    lines.append(f'<path class="axes" d="M{left},{top} L{left},{bottom} L{right},{bottom}" '
                 'stroke="black" fill="none"/>')
    for x, a in zip(xs, axis):
        lines.append(f'<line class="tick" x1="{_fmt(x)}" y1="{bottom}" x2="{_fmt(x)}" '
                     f'y2="{bottom + 5}" stroke="black"/>')
        lines.append(f'<text class="tick-label" x="{_fmt(x)}" y="{bottom + 20}" '
                     f'text-anchor="middle" font-size="11">{a:g}</text>')
    for e in (e_lo, e_hi):
        lines.append(f'<text class="y-label" x="{left - 5}" y="{_fmt(ypix(e) + 4)}" '
                     f'text-anchor="end" font-size="11">{e:.3g}</text>')
    lines.append(f'<text x="{(left + right) // 2}" y="{height - 8}" text-anchor="middle" '
                 f'font-size="12">{escape(report.axis_name)}</text>')
    for k, (name, row) in enumerate(zip(report.letters, errors)):
        color = PALETTE[k % len(PALETTE)]
        run = []
        for x, e in zip(xs, row):
            if np.isfinite(e):
                run.append((x, ypix(e)))
                continue
            if run:
                lines.append(_polyline(np.array(run), color, name))
            run = []
        if run:
            lines.append(_polyline(np.array(run), color, name))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(data, **options) -> str:
    """Render a sweep report or a list of trajectories."""
    if hasattr(data, "axis_name"):
        return render_report(data, **options)
    return render_trajectories(data, **options)
