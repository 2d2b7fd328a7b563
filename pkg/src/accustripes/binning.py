"""Bin-edge computation and histogram evaluation for ensemble rows.

Three strategies are supported:

* uniform: equal-width bins over shared limits, bin count from Sturges' rule
* bayesian blocks: change-point partition maximizing a per-block event
  likelihood minus a complexity penalty (narrow blocks at peaks, wide
  blocks over sparse regions)
* natural breaks: contiguous 1-D clustering minimizing the within-class
  sum of squared deviations (Fisher's exact dynamic program)

All strategies share the conventions: degenerate all-equal input yields
the single bin [v-0.5, v+0.5]; bin membership is half-open [lo, hi) with
the last bin closed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, InvalidParameterError, OutOfBoundsError
from .ingest import EnsembleDataset

UNIFORM = "uniform"
BAYESIAN_BLOCKS = "bb"
NATURAL_BREAKS = "nb"

_KINDS = (UNIFORM, BAYESIAN_BLOCKS, NATURAL_BREAKS)

# Above this many distinct values, ensemble-level adaptive binning snaps
# samples to rank-quantile cells before running the quadratic DP.
DEFAULT_MAX_CELLS = 4096


@dataclass(frozen=True)
class BinningMethod:
    """Configuration for one binning strategy.

    kind        one of "uniform", "bb", "nb"
    p0          false-positive rate of the bayesian-blocks prior, in (0, 1)
    class_count natural-breaks class count; None = shared Sturges count
    pooled      compute adaptive edges once from the union of all rows
                instead of per row
    max_cells   distinct-value budget before quantile compression kicks in
                (ensemble-level adaptive methods only); None = always exact
    """

    kind: str
    p0: float = 0.05
    class_count: int | None = None
    pooled: bool = False
    max_cells: int | None = DEFAULT_MAX_CELLS

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParameterError(f"unknown binning kind: {self.kind!r}")
        if not 0.0 < self.p0 < 1.0:
            raise InvalidParameterError(f"p0 must be in (0, 1), got {self.p0}")
        if self.class_count is not None and self.class_count < 1:
            raise InvalidParameterError(
                f"class_count must be >= 1, got {self.class_count}"
            )


@dataclass(frozen=True)
class Histogram:
    """Bin edges plus per-bin counts for one row.

    edges is strictly increasing with len(counts) + 1 entries and
    sum(counts) == n.
    """

    edges: np.ndarray
    counts: np.ndarray
    n: int

    def to_json(self) -> dict:
        return {
            "edges": [float(e) for e in self.edges],
            "counts": [int(c) for c in self.counts],
            "n": int(self.n),
        }


def sturges_bin_count(n: int) -> int:
    """Bin count by Sturges' rule: ceil(1 + log2(n))."""
    if n < 1:
        raise EmptyInputError("Sturges' rule needs at least one sample")
    return max(1, math.ceil(1.0 + math.log2(n)))


def uniform_edges(limits: tuple[float, float], k: int) -> np.ndarray:
    """k+1 equally spaced edges over [min, max].

    A degenerate range (min == max) collapses to the single bin
    [min-0.5, min+0.5] regardless of k.
    """
    lo, hi = limits
    if k < 1:
        raise InvalidParameterError(f"bin count must be >= 1, got {k}")
    if lo > hi:
        raise InvalidParameterError(f"invalid range ({lo}, {hi})")
    if lo == hi:
        return np.array([lo - 0.5, lo + 0.5])
    return np.linspace(lo, hi, k + 1)


def _sorted_samples(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if x.size == 0:
        raise EmptyInputError("need at least one sample")
    if not np.all(np.isfinite(x)):
        raise InvalidParameterError("samples must be finite")
    return np.sort(x)


def _quantile_cells(x_sorted: np.ndarray, max_cells: int):
    """Snap sorted samples to at most max_cells rank-quantile cells.

    Returns (values, weights): cell means (strictly increasing) with the
    number of samples snapped into each cell. Within-cell spread is lost,
    which is the documented approximation for large rows.
    """
    n = x_sorted.size
    bounds = np.linspace(0, n, max_cells + 1).round().astype(int)
    bounds = np.unique(bounds)
    counts = np.diff(bounds)
    sums = np.add.reduceat(x_sorted, bounds[:-1])
    values = sums / counts
    # constant runs can produce equal adjacent means; merge them
    keep = np.concatenate([[True], np.diff(values) > 0])
    if not keep.all():
        group = np.cumsum(keep) - 1
        weights = np.bincount(group, weights=counts).astype(np.int64)
        values = np.bincount(group, weights=values * counts) / weights
    else:
        weights = counts.astype(np.int64)
    return values, weights


def _distinct_cells(x_sorted: np.ndarray, max_cells: int | None):
    """Distinct values + multiplicities, quantile-compressed past max_cells."""
    values, weights = np.unique(x_sorted, return_counts=True)
    if max_cells is not None and values.size > max_cells:
        values, weights = _quantile_cells(x_sorted, max_cells)
    return values, weights.astype(np.int64)


def bb_penalty(n: int, p0: float) -> float:
    """Complexity penalty per extra block, derived from the false-positive
    rate p0 for n event samples (the standard empirical prior)."""
    return 4.0 - math.log(73.53 * p0 * n ** -0.478)


def bayesian_blocks_edges(
    samples, p0: float = 0.05, max_cells: int | None = None
) -> np.ndarray:
    """Change-point bin edges for event samples.

    Maximizes the total block fitness sum(N_b * (ln N_b - ln T_b)) minus
    (blocks - 1) * penalty over all partitions whose edges come from the
    candidate set {min, midpoints of consecutive distinct values, max}.
    Ties are broken toward fewer blocks. One dynamic-programming sweep,
    O(m^2) in the number of distinct values.
    """
    if not 0.0 < p0 < 1.0:
        raise InvalidParameterError(f"p0 must be in (0, 1), got {p0}")
    x = _sorted_samples(samples)
    values, weights = _distinct_cells(x, max_cells)
    return _bayesian_blocks_cells(values, weights, x[0], x[-1], int(x.size), p0)


def _bayesian_blocks_cells(values, weights, vmin, vmax, n, p0):
    m = values.size
    if m == 1:
        v = values[0]
        return np.array([v - 0.5, v + 0.5])
    cand = np.concatenate([[vmin], 0.5 * (values[1:] + values[:-1]), [vmax]])
    penalty = bb_penalty(n, p0)
    wcum = np.concatenate([[0], np.cumsum(weights)])

    best = np.empty(m)
    last = np.empty(m, dtype=np.int64)
    nblocks = np.empty(m, dtype=np.int64)
    for r in range(m):
        # fitness of a final block spanning cells i..r, for every i
        widths = cand[r + 1] - cand[: r + 1]
        counts = wcum[r + 1] - wcum[: r + 1]
        total = counts * (np.log(counts) - np.log(widths)) - penalty
        total[1:] += best[:r]
        top = total.max()
        ties = np.flatnonzero(total == top)
        if ties.size == 1:
            i = ties[0]
        else:
            # prefer fewer blocks overall, then the earliest start
            blocks = np.where(ties > 0, nblocks[ties - 1] + 1, 1)
            i = ties[np.argmin(blocks)]
        last[r] = i
        best[r] = top
        nblocks[r] = nblocks[i - 1] + 1 if i > 0 else 1

    change_points = [m]
    idx = m
    while idx > 0:
        idx = last[idx - 1]
        change_points.append(idx)
    change_points.reverse()
    return cand[np.asarray(change_points)]


def natural_breaks_edges(
    samples, k: int, max_cells: int | None = None
) -> np.ndarray:
    """Natural-breaks bin edges: min(k, distinct-count) contiguous classes
    minimizing the within-class sum of squared deviations.

    Interior edges sit at the midpoint between the last value of one class
    and the first value of the next; outer edges at the row min/max. Ties
    are broken toward the lexicographically smallest break-index vector.
    """
    if k < 1:
        raise InvalidParameterError(f"class count must be >= 1, got {k}")
    x = _sorted_samples(samples)
    values, weights = _distinct_cells(x, max_cells)
    return _natural_breaks_cells(values, weights, x[0], x[-1], k)


def _natural_breaks_cells(values, weights, vmin, vmax, k):
    m = values.size
    if m == 1:
        v = values[0]
        return np.array([v - 0.5, v + 0.5])
    kk = min(k, m)
    if kk == 1:
        return np.array([vmin, vmax])
    starts = _fisher_breaks(values, weights.astype(float), kk)
    interior = 0.5 * (values[starts - 1] + values[starts])
    return np.concatenate([[vmin], interior, [vmax]])


def _fisher_breaks(values: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """Start indices (length k-1, ascending) of classes 2..k in the optimal
    partition of weighted values into k contiguous classes.

    Suffix dynamic program; the forward reconstruction scans split points
    left to right and keeps the first one attaining the optimum, which
    yields the lexicographically smallest break-index vector on ties.
    """
    m = values.size
    # centering shrinks the prefix-sum magnitudes, which keeps the
    # cancellation in the SSD formula far below any realistic tie gap
    values = values - (w * values).sum() / w.sum()
    cw = np.concatenate([[0.0], np.cumsum(w)])
    cs = np.concatenate([[0.0], np.cumsum(w * values)])
    cq = np.concatenate([[0.0], np.cumsum(w * values * values)])

    def ssd_from(i, ends):
        # within-class SSD of values[i..e] for each e in ends (inclusive)
        tw = cw[ends + 1] - cw[i]
        ts = cs[ends + 1] - cs[i]
        tq = cq[ends + 1] - cq[i]
        return tq - ts * ts / tw

    # cost[j][i]: optimal SSD of splitting values[i:] into j classes
    cost = np.full((k + 1, m + 1), np.inf)
    cost[1, :m] = ssd_from(np.arange(m), np.full(m, m - 1))
    for j in range(2, k + 1):
        for i in range(m - j + 1):
            ends = np.arange(i, m - j + 1)
            cost[j, i] = (ssd_from(i, ends) + cost[j - 1, ends + 1]).min()

    starts = np.empty(k - 1, dtype=np.int64)
    i = 0
    for j in range(k, 1, -1):
        ends = np.arange(i, m - j + 1)
        totals = ssd_from(i, ends) + cost[j - 1, ends + 1]
        e = ends[int(np.argmax(totals == cost[j, i]))]
        starts[k - j] = e + 1
        i = e + 1
    return starts


def histogram(samples, edges) -> Histogram:
    """Count samples per bin: half-open [e_i, e_i+1), last bin closed."""
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise InvalidParameterError("edges must be strictly increasing, >= 2")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size:
        if x.min() < edges[0] or x.max() > edges[-1]:
            raise OutOfBoundsError(
                f"sample outside edge range [{edges[0]}, {edges[-1]}]"
            )
    counts, _ = np.histogram(x, bins=edges)
    return Histogram(edges=edges, counts=counts.astype(np.int64), n=int(x.size))


def _effective_range(lo: float, hi: float) -> tuple[float, float]:
    if lo < hi:
        return lo, hi
    return lo - 0.5, hi + 0.5


def _stretch(edges: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Extend the outermost edges to the shared display limits.

    Interior edges always lie strictly inside (row min, row max), so the
    stretch never breaks monotonicity. A degenerate single-bin edge pair
    is replaced by the shared limits outright.
    """
    if edges.size == 2:
        return np.array([lo, hi])
    out = edges.copy()
    out[0] = min(out[0], lo)
    out[-1] = max(out[-1], hi)
    return out


def bin_ensemble(
    ensemble: EnsembleDataset,
    method: BinningMethod,
    zoom: tuple[float, float] | None = None,
) -> list[Histogram]:
    """Histogram every row of an ensemble under one strategy.

    With a zoom range, each row's samples are first filtered to [lo, hi]
    and all derived quantities (Sturges count, edges, limits) are
    recomputed on the filtered data. Uniform binning shares one edge set
    across rows; adaptive methods compute edges per row (or once from the
    pooled union when method.pooled) over the shared limits. A row left
    empty by the filter yields a single empty bin spanning the range.
    """
    if not ensemble.rows:
        raise EmptyInputError("ensemble has no rows")
    if zoom is not None:
        lo, hi = float(zoom[0]), float(zoom[1])
        if not lo < hi:
            raise InvalidParameterError(f"zoom range ({lo}, {hi}) needs lo < hi")
        filtered = [r.samples[(r.samples >= lo) & (r.samples <= hi)]
                    for r in ensemble.rows]
    else:
        lo, hi = ensemble.global_min, ensemble.global_max
        filtered = [r.samples for r in ensemble.rows]

    lo, hi = _effective_range(lo, hi)
    sizes = [x.size for x in filtered]
    nmax = max(sizes)
    if nmax == 0:
        empty = Histogram(np.array([lo, hi]), np.array([0], dtype=np.int64), 0)
        return [empty for _ in filtered]

    k = sturges_bin_count(nmax)
    shared = uniform_edges((lo, hi), k) if method.kind == UNIFORM else None
    pooled_edges = None
    if method.pooled and method.kind != UNIFORM:
        union = np.concatenate([x for x in filtered if x.size])
        pooled_edges = _row_edges(union, method, k)

    out = []
    for x in filtered:
        if x.size == 0:
            out.append(
                Histogram(np.array([lo, hi]), np.array([0], dtype=np.int64), 0)
            )
            continue
        if method.kind == UNIFORM:
            edges = shared
        elif pooled_edges is not None:
            edges = _stretch(pooled_edges, lo, hi)
        else:
            edges = _stretch(_row_edges(x, method, k), lo, hi)
        out.append(histogram(x, edges))
    return out


def _row_edges(x: np.ndarray, method: BinningMethod, sturges_k: int) -> np.ndarray:
    if method.kind == BAYESIAN_BLOCKS:
        return bayesian_blocks_edges(x, method.p0, method.max_cells)
    k = method.class_count if method.class_count is not None else sturges_k
    return natural_breaks_edges(x, k, method.max_cells)
