"""Kernel density estimation for stripe overlay and filled-curve drawing.

Gaussian kernel, Silverman rule-of-thumb bandwidth. Curves are evaluated
on an equally spaced display grid so rows align on the shared axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, InvalidParameterError

DISPLAY_GRID_POINTS = 512


@dataclass(frozen=True)
class DensityCurve:
    """Density values ys over a strictly increasing grid xs."""

    xs: np.ndarray
    ys: np.ndarray
    bandwidth: float

    def to_json(self) -> dict:
        return {
            "xs": [float(v) for v in self.xs],
            "ys": [float(v) for v in self.ys],
            "h": float(self.bandwidth),
        }


def quartiles(samples) -> tuple[float, float]:
    """First and third quartile, linear interpolation between order
    statistics (position (n-1)*p, the inclusive convention)."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise EmptyInputError("need at least one sample")
    return float(np.percentile(x, 25)), float(np.percentile(x, 75))


def silverman_bandwidth(samples, fallback_scale: float = 1.0) -> float:
    """Rule-of-thumb bandwidth 0.9 * min(s, IQR/1.34) * n^(-1/5).

    s is the sample standard deviation (ddof=1; zero for n=1). When both
    spread measures vanish (constant data), fallback_scale is returned so
    degenerate rows still draw a visible bump.
    """
    if fallback_scale <= 0:
        raise InvalidParameterError("fallback_scale must be positive")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInputError("need at least one sample")
    s = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    q1, q3 = quartiles(x)
    iqr = q3 - q1
    spread = min(s, iqr / 1.34) if (s > 0 and iqr > 0) else max(s, iqr / 1.34)
    if spread <= 0:
        return float(fallback_scale)
    return 0.9 * spread * x.size ** (-1.0 / 5.0)


def kde_curve(samples, h: float, grid: tuple[float, float, int]) -> DensityCurve:
    """Gaussian-kernel density on `points` equally spaced values in [lo, hi].

    ys[i] = (1 / (n*h)) * sum_j K((xs[i] - x_j) / h) with the standard
    normal kernel K.
    """
    if h <= 0:
        raise InvalidParameterError(f"bandwidth must be positive, got {h}")
    lo, hi, points = grid
    if not lo < hi:
        raise InvalidParameterError(f"grid range ({lo}, {hi}) needs lo < hi")
    if points < 2:
        raise InvalidParameterError("grid needs at least 2 points")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInputError("need at least one sample")
    xs = np.linspace(lo, hi, int(points))
    ys = np.zeros_like(xs)
    norm = 1.0 / (x.size * h * np.sqrt(2.0 * np.pi))
    # chunked so the (grid x samples) matrix stays bounded for large rows
    step = max(1, 2_000_000 // xs.size)
    for start in range(0, x.size, step):
        u = (xs[:, None] - x[None, start:start + step]) / h
        ys += np.exp(-0.5 * u * u).sum(axis=1)
    ys *= norm
    return DensityCurve(xs=xs, ys=ys, bandwidth=float(h))


def row_density(samples, limits: tuple[float, float],
                global_range: float,
                points: int = DISPLAY_GRID_POINTS) -> DensityCurve:
    """Display curve for one row, clipped to the shared axis limits.

    The bandwidth fallback for constant rows is 1e-3 of the ensemble's
    global range (1.0 when that is also zero).
    """
    fallback = 1e-3 * global_range if global_range > 0 else 1.0
    h = silverman_bandwidth(samples, fallback_scale=fallback)
    lo, hi = limits
    if not lo < hi:
        lo, hi = lo - 0.5, hi + 0.5
    return kde_curve(samples, h, (lo, hi, points))
