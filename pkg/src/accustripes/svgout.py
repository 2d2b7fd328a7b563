"""Deterministic SVG rendering of scenes and single histograms.

Every numeric attribute is written with exactly three decimals and all
elements are emitted in a fixed order (stripes top-to-bottom, rects
left-to-right, curves after rects, axis last), so the same scene always
produces byte-identical output. Chrome (axis, labels) deliberately avoids
the #000000 fill reserved for empty bins.
"""

from __future__ import annotations

import math

from .binning import Histogram
from .compose import SceneModel, hex_color, round_ticks
from .errors import LayoutError

CHROME = "#222222"

LINEAR_Y = "linearY"
LOG_Y = "logY"


def _f(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def render_svg(scene: SceneModel) -> str:
    """Standalone SVG document for a stacked-stripe scene."""
    lay = scene.layout
    if lay.stripe_height <= 0 or lay.plot_width <= 0 or not scene.stripes:
        raise LayoutError("scene has zero drawable area")
    lo, hi = scene.axis.min, scene.axis.max
    span = hi - lo
    if span <= 0:
        raise LayoutError("axis range has zero width")

    def px(x: float) -> float:
        return lay.label_gutter + (x - lo) / span * lay.plot_width

    width, height = scene.width, scene.height
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect x="0.000" y="0.000" width="{_f(width)}" height="{_f(height)}" '
        f'fill="#ffffff"/>',
    ]
    for i, stripe in enumerate(scene.stripes):
        top = i * (lay.stripe_height + lay.gap)
        out.append(f'<g data-row="{i}">')
        for r in stripe.rects:
            x0, x1 = px(r.x0), px(r.x1)
            rh = r.h * lay.stripe_height
            ry = top + lay.stripe_height - rh
            out.append(
                f'<rect x="{_f(x0)}" y="{_f(ry)}" width="{_f(x1 - x0)}" '
                f'height="{_f(rh)}" fill="{hex_color(r.color)}"/>'
            )
        if stripe.curve:
            pts = " ".join(
                f"{_f(px(x))},{_f(top + (1.0 - y) * lay.stripe_height)}"
                for x, y in stripe.curve
            )
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="#ffffff" '
                f'stroke-width="1.000"/>'
            )
        if stripe.label:
            ty = top + lay.stripe_height * 0.5 + 3.0
            out.append(
                f'<text x="{_f(lay.label_gutter - 6.0)}" y="{_f(ty)}" '
                f'font-family="sans-serif" font-size="9.000" fill="{CHROME}" '
                f'text-anchor="end">{_esc(stripe.label)}</text>'
            )
        out.append("</g>")

    n = len(scene.stripes)
    axis_y = n * (lay.stripe_height + lay.gap) - lay.gap + 6.0
    out.append(
        f'<line x1="{_f(px(lo))}" y1="{_f(axis_y)}" x2="{_f(px(hi))}" '
        f'y2="{_f(axis_y)}" stroke="{CHROME}" stroke-width="1.000"/>'
    )
    for x, label in scene.axis.ticks:
        tx = px(x)
        out.append(
            f'<line x1="{_f(tx)}" y1="{_f(axis_y)}" x2="{_f(tx)}" '
            f'y2="{_f(axis_y + 4.0)}" stroke="{CHROME}" stroke-width="1.000"/>'
        )
        out.append(
            f'<text x="{_f(tx)}" y="{_f(axis_y + 14.0)}" '
            f'font-family="sans-serif" font-size="9.000" fill="{CHROME}" '
            f'text-anchor="middle">{_esc(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_single_histogram(hist: Histogram, axis_mode: str = LINEAR_Y,
                            width: float = 640.0, height: float = 360.0) -> str:
    """Classical bar chart of one histogram.

    logY maps bar heights by log10(count + 1); zero-count bins draw no
    bar in either mode.
    """
    if axis_mode not in (LINEAR_Y, LOG_Y):
        raise LayoutError(f"unknown axis mode {axis_mode!r}")
    margin_l, margin_r, margin_t, margin_b = 52.0, 12.0, 12.0, 32.0
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    if plot_w <= 0 or plot_h <= 0:
        raise LayoutError("chart has zero drawable area")

    edges = hist.edges
    counts = hist.counts
    lo, hi = float(edges[0]), float(edges[-1])
    span = hi - lo

    def bar_value(c: int) -> float:
        return math.log10(c + 1.0) if axis_mode == LOG_Y else float(c)

    top = max((bar_value(int(c)) for c in counts), default=0.0)
    top = top if top > 0 else 1.0

    def px(x: float) -> float:
        return margin_l + (x - lo) / span * plot_w

    def py(v: float) -> float:
        return margin_t + plot_h - (v / top) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect x="0.000" y="0.000" width="{_f(width)}" height="{_f(height)}" '
        f'fill="#ffffff"/>',
    ]
    for b, c in enumerate(counts):
        if c == 0:
            continue
        x0, x1 = px(float(edges[b])), px(float(edges[b + 1]))
        y = py(bar_value(int(c)))
        out.append(
            f'<rect x="{_f(x0)}" y="{_f(y)}" width="{_f(x1 - x0)}" '
            f'height="{_f(margin_t + plot_h - y)}" fill="#46327e" '
            f'stroke="#ffffff" stroke-width="0.500"/>'
        )
    base_y = margin_t + plot_h
    out.append(
        f'<line x1="{_f(margin_l)}" y1="{_f(base_y)}" x2="{_f(margin_l + plot_w)}" '
        f'y2="{_f(base_y)}" stroke="{CHROME}" stroke-width="1.000"/>'
    )
    out.append(
        f'<line x1="{_f(margin_l)}" y1="{_f(margin_t)}" x2="{_f(margin_l)}" '
        f'y2="{_f(base_y)}" stroke="{CHROME}" stroke-width="1.000"/>'
    )
    for x in round_ticks(lo, hi):
        out.append(
            f'<text x="{_f(px(x))}" y="{_f(base_y + 14.0)}" '
            f'font-family="sans-serif" font-size="9.000" fill="{CHROME}" '
            f'text-anchor="middle">{x:g}</text>'
        )
    if axis_mode == LOG_Y:
        decade = 1
        while math.log10(decade + 1.0) <= top:
            v = math.log10(decade + 1.0)
            out.append(
                f'<text x="{_f(margin_l - 6.0)}" y="{_f(py(v) + 3.0)}" '
                f'font-family="sans-serif" font-size="9.000" fill="{CHROME}" '
                f'text-anchor="end">{decade:g}</text>'
            )
            decade *= 10
    else:
        for v in round_ticks(0.0, top, target=5):
            out.append(
                f'<text x="{_f(margin_l - 6.0)}" y="{_f(py(v) + 3.0)}" '
                f'font-family="sans-serif" font-size="9.000" fill="{CHROME}" '
                f'text-anchor="end">{v:g}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
