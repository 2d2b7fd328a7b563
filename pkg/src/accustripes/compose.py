"""Stripe composition: histograms + density curves -> colored geometry.

A stripe is one horizontal band whose rectangles encode one row's bin
counts by color. Three compositions exist: color-only (full-height
rectangles), overlay (full-height rectangles plus a white density
polyline), and filled-curve (rectangles cropped to the area under the
density curve). Stripes stack top-to-bottom into a scene with one shared
horizontal axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import viridis
from .binning import Histogram
from .density import DensityCurve
from .errors import CompositionError, InvalidParameterError

COLOR_ONLY = "colorOnly"
OVERLAY = "overlay"
FILLED_CURVE = "filledCurve"
COMPOSITIONS = (COLOR_ONLY, OVERLAY, FILLED_CURVE)

LINEAR = "linear"
LOG1P = "log1p"

GLOBAL = "global"
PER_ROW = "perRow"


@dataclass(frozen=True)
class ColorScale:
    """Count-to-color mapping over a fixed domain.

    domain_max is the largest count the scale must represent (the max
    bin count in scope: ensemble-wide for global normalization, one row
    for perRow). Count 0 always maps to exact black.
    """

    mode: str = LINEAR
    normalization: str = GLOBAL
    domain_max: int = 1
    lut: tuple = viridis.VIRIDIS_256

    def __post_init__(self):
        if self.mode not in (LINEAR, LOG1P):
            raise InvalidParameterError(f"unknown color mode {self.mode!r}")
        if self.normalization not in (GLOBAL, PER_ROW):
            raise InvalidParameterError(
                f"unknown normalization {self.normalization!r}")
        if self.domain_max < 1:
            raise InvalidParameterError("domain_max must be >= 1")
        if len(self.lut) != 256:
            raise InvalidParameterError("lut must have 256 entries")


def map_color(count: int, scale: ColorScale) -> tuple[int, int, int]:
    """RGB for one bin count; empty bins are black, all others come from
    the viridis ramp at the (linear or log1p) normalized position."""
    if count <= 0:
        return (0, 0, 0)
    if scale.mode == LINEAR:
        t = count / scale.domain_max
    else:
        t = math.log1p(count) / math.log1p(scale.domain_max)
    return viridis.lookup(min(t, 1.0))


def hex_color(rgb: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


@dataclass(frozen=True)
class StripeRect:
    x0: float
    x1: float
    h: float  # height fraction of the stripe band, (0, 1]
    color: tuple[int, int, int]


@dataclass(frozen=True)
class StripeModel:
    """Resolved geometry of one stripe.

    curve, when present, is a polyline in stripe-local coordinates:
    x in data units, y in [0, 1] with 1 at the stripe top.
    """

    label: str
    rects: tuple[StripeRect, ...]
    composition: str
    curve: tuple[tuple[float, float], ...] | None = None

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "composition": self.composition,
            "rects": [
                {"x0": r.x0, "x1": r.x1, "h": r.h, "color": hex_color(r.color)}
                for r in self.rects
            ],
        }
        if self.curve is not None:
            out["curve"] = [{"x": x, "y": y} for x, y in self.curve]
        return out


def resolve_scales(histograms: list[Histogram], mode: str,
                   normalization: str) -> list[ColorScale]:
    """One resolved ColorScale per histogram.

    Global normalization shares one domain (the max bin count across all
    histograms) so equal counts in different rows get equal colors;
    perRow normalizes each row to its own maximum.
    """
    if normalization == GLOBAL:
        top = max((int(h.counts.max()) for h in histograms if h.counts.size),
                  default=0)
        shared = ColorScale(mode, GLOBAL, max(top, 1))
        return [shared] * len(histograms)
    return [
        ColorScale(mode, PER_ROW, max(int(h.counts.max()), 1)
                   if h.counts.size else 1)
        for h in histograms
    ]


def _scaled_curve(curve: DensityCurve, peak: float | None):
    top = peak if peak is not None else float(curve.ys.max())
    if top <= 0:
        return curve.xs, np.zeros_like(curve.ys)
    return curve.xs, np.minimum(curve.ys / top, 1.0)


def compose_stripe(hist: Histogram, curve: DensityCurve | None,
                   composition: str, scale: ColorScale, label: str = "",
                   curve_peak: float | None = None) -> StripeModel:
    """Build one stripe from a histogram and (for curve compositions) a
    density curve.

    curve_peak sets the density value mapped to the stripe top; None uses
    the row's own maximum (per-row scaling). filled-curve rectangles are
    the bin rectangles clipped against the area under the piecewise-linear
    curve, emitted per curve segment with the exact trapezoid area.
    """
    if composition not in COMPOSITIONS:
        raise InvalidParameterError(f"unknown composition {composition!r}")
    needs_curve = composition in (OVERLAY, FILLED_CURVE)
    if needs_curve and curve is None:
        raise CompositionError(f"composition {composition!r} requires a curve")

    edges = hist.edges
    colors = [map_color(int(c), scale) for c in hist.counts]

    if needs_curve:
        if curve.xs[0] > edges[0] or curve.xs[-1] < edges[-1]:
            raise CompositionError("curve grid does not span the bin edges")
        xs, ys = _scaled_curve(curve, curve_peak)

    if composition == FILLED_CURVE:
        rects = []
        for b in range(len(hist.counts)):
            e0, e1 = float(edges[b]), float(edges[b + 1])
            inner = xs[(xs > e0) & (xs < e1)]
            cuts = np.concatenate([[e0], inner, [e1]])
            heights = np.interp(cuts, xs, ys)
            for a, bb, ya, yb in zip(cuts[:-1], cuts[1:], heights[:-1],
                                     heights[1:]):
                h = 0.5 * (ya + yb)
                if h > 0:
                    rects.append(StripeRect(float(a), float(bb),
                                            min(float(h), 1.0), colors[b]))
        polyline = None
    else:
        rects = [
            StripeRect(float(edges[b]), float(edges[b + 1]), 1.0, colors[b])
            for b in range(len(hist.counts))
        ]
        polyline = None
        if composition == OVERLAY:
            polyline = tuple(
                (float(x), float(y)) for x, y in zip(xs, ys)
            )
    return StripeModel(label=label, rects=tuple(rects),
                       composition=composition, curve=polyline)


@dataclass(frozen=True)
class AxisModel:
    min: float
    max: float
    ticks: tuple[tuple[float, str], ...]

    def to_json(self) -> dict:
        return {
            "min": self.min,
            "max": self.max,
            "ticks": [{"x": x, "label": s} for x, s in self.ticks],
        }


@dataclass(frozen=True)
class Layout:
    stripe_height: float = 14.0
    gap: float = 2.0
    plot_width: float = 1200.0
    label_gutter: float = 60.0
    axis_band: float = 28.0


@dataclass(frozen=True)
class SceneModel:
    stripes: tuple[StripeModel, ...]
    axis: AxisModel
    layout: Layout = field(default_factory=Layout)

    @property
    def height(self) -> float:
        n = len(self.stripes)
        return (n * (self.layout.stripe_height + self.layout.gap)
                - self.layout.gap + self.layout.axis_band)

    @property
    def width(self) -> float:
        # small right pad keeps the last tick label inside the viewport
        return self.layout.label_gutter + self.layout.plot_width + 12.0

    def to_json(self) -> dict:
        return {
            "axis": self.axis.to_json(),
            "stripes": [s.to_json() for s in self.stripes],
        }


def _nice_step(raw: float) -> float:
    """Smallest 1-2-5 progression value >= raw."""
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if mult * mag >= raw * (1 - 1e-12):
            return mult * mag
    return 10.0 * mag


def round_ticks(lo: float, hi: float, target: int = 8) -> list[float]:
    """Round tick positions inside [lo, hi]: at most `target` intervals of
    a 1-2-5 step size."""
    if not lo < hi:
        return [lo]
    step = _nice_step((hi - lo) / target)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if t == 0 else t)
        t = first + len(ticks) * step
    return ticks


def _tick_label(v: float) -> str:
    return f"{v:g}"


def stack_scene(stripes, limits: tuple[float, float],
                layout: Layout | None = None) -> SceneModel:
    """Stack stripes top-to-bottom over one shared horizontal axis."""
    stripes = tuple(stripes)
    if not stripes:
        raise InvalidParameterError("need at least one stripe")
    lo, hi = float(limits[0]), float(limits[1])
    if not lo < hi:
        lo, hi = lo - 0.5, hi + 0.5
    ticks = tuple((t, _tick_label(t)) for t in round_ticks(lo, hi))
    return SceneModel(
        stripes=stripes,
        axis=AxisModel(min=lo, max=hi, ticks=ticks),
        layout=layout if layout is not None else Layout(),
    )
