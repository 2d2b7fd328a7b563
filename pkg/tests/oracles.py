"""Independent reference implementations used to derive expected values.

Everything here is deliberately naive (exhaustive search, per-sample
loops, explicit line walking) and shares no code with the package paths
it checks.
"""

import itertools
import math

import numpy as np


def bb_exhaustive(samples, p0=0.05):
    """Best bayesian-blocks partition by trying every candidate-edge subset.

    Objective: sum over blocks of N*(ln N - ln T) minus (blocks-1) times
    the empirical prior penalty. Subsets are visited in order of
    increasing block count and only strict improvements are kept, so ties
    resolve toward fewer blocks.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    values, weights = np.unique(x, return_counts=True)
    m = len(values)
    if m == 1:
        return np.array([values[0] - 0.5, values[0] + 0.5])
    cand = np.concatenate([values[:1], 0.5 * (values[1:] + values[:-1]),
                           values[-1:]])
    penalty = 4.0 - math.log(73.53 * p0 * x.size ** -0.478)
    wcum = np.concatenate([[0], np.cumsum(weights)])
    best_fit = -math.inf
    best_cps = None
    for nblocks in range(1, m + 1):
        for interior in itertools.combinations(range(1, m), nblocks - 1):
            cps = (0, *interior, m)
            fit = -(nblocks - 1) * penalty
            for a, b in zip(cps[:-1], cps[1:]):
                count = wcum[b] - wcum[a]
                width = cand[b] - cand[a]
                fit += count * (math.log(count) - math.log(width))
            if fit > best_fit:
                best_fit = fit
                best_cps = cps
    return cand[np.asarray(best_cps)]


def nb_exhaustive(samples, k):
    """Minimal within-class SSD over every contiguous partition.

    Returns (edges, ssd, breaks) where breaks are the distinct-value
    start indices of classes 2..k. Partitions are visited in lexicographic
    break order with strict improvement, so ties resolve to the smallest
    break vector.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    values, weights = np.unique(x, return_counts=True)
    m = len(values)
    if m == 1:
        return np.array([values[0] - 0.5, values[0] + 0.5]), 0.0, ()
    kk = min(k, m)

    def class_ssd(idx):
        v, w = values[idx], weights[idx]
        mu = float((v * w).sum() / w.sum())
        return float((w * (v - mu) ** 2).sum())

    best = (math.inf, None)
    for breaks in itertools.combinations(range(1, m), kk - 1):
        bounds = (0, *breaks, m)
        total = sum(class_ssd(np.arange(a, b))
                    for a, b in zip(bounds[:-1], bounds[1:]))
        if total < best[0]:
            best = (total, breaks)
    breaks = best[1]
    interior = [(values[b - 1] + values[b]) / 2 for b in breaks]
    edges = np.array([values[0], *interior, values[-1]])
    return edges, best[0], breaks


def histogram_loop(samples, edges):
    """Per-sample loop: half-open bins, last bin closed."""
    counts = [0] * (len(edges) - 1)
    for v in samples:
        for b in range(len(edges) - 1):
            last = b == len(edges) - 2
            if edges[b] <= v < edges[b + 1] or (last and v == edges[b + 1]):
                counts[b] += 1
                break
        else:
            raise AssertionError(f"sample {v} outside edges")
    return counts


def quartiles_by_hand(samples):
    """Order-statistic quartiles at positions (n-1)*p, linear interpolation."""
    x = sorted(float(v) for v in samples)
    n = len(x)

    def at(p):
        pos = (n - 1) * p
        i = int(math.floor(pos))
        frac = pos - i
        if i + 1 < n:
            return x[i] + frac * (x[i + 1] - x[i])
        return x[i]

    return at(0.25), at(0.75)


def silverman_by_hand(samples, fallback=1.0):
    x = [float(v) for v in samples]
    n = len(x)
    mean = sum(x) / n
    s = math.sqrt(sum((v - mean) ** 2 for v in x) / (n - 1)) if n > 1 else 0.0
    q1, q3 = quartiles_by_hand(x)
    iqr = q3 - q1
    if s > 0 and iqr > 0:
        spread = min(s, iqr / 1.34)
    else:
        spread = max(s, iqr / 1.34)
    if spread <= 0:
        return fallback
    return 0.9 * spread * n ** (-0.2)


def trapezoid(ys, xs):
    total = 0.0
    for i in range(len(xs) - 1):
        total += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i])
    return total


CROFTON_DIRECTIONS = (
    (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1),
    (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1),
)


def crofton_line_walk(mask):
    """13-direction line-intercept area estimate by explicit line walking.

    For each direction, every lattice line through the (padded) volume is
    walked point by point and foreground/background flips are counted.
    Per direction the estimate is 2 * flips / |d|; the result is the mean
    over directions.
    """
    mask = np.asarray(mask, dtype=bool)
    padded = np.pad(mask, 1)
    shape = padded.shape
    total = 0.0
    for d in CROFTON_DIRECTIONS:
        norm = math.sqrt(sum(c * c for c in d))
        flips = 0
        for start in np.ndindex(shape):
            # walk only from the first point of each lattice line
            prev = tuple(s - c for s, c in zip(start, d))
            if all(0 <= p < s for p, s in zip(prev, shape)):
                continue
            state = False
            p = start
            while all(0 <= c < s for c, s in zip(p, shape)):
                value = bool(padded[p])
                if value != state:
                    flips += 1
                    state = value
                p = tuple(c + step for c, step in zip(p, d))
            if state:  # line left the grid while inside foreground
                flips += 1
        total += 2.0 * flips / norm
    return total / len(CROFTON_DIRECTIONS)


def ball_lattice_count(center, radius):
    """Number of voxel centers (index + 0.5) strictly inside the sphere."""
    cx, cy, cz = center
    r = radius
    count = 0
    for ix in range(int(math.floor(cx - r)) - 1, int(math.ceil(cx + r)) + 1):
        for iy in range(int(math.floor(cy - r)) - 1, int(math.ceil(cy + r)) + 1):
            for iz in range(int(math.floor(cz - r)) - 1, int(math.ceil(cz + r)) + 1):
                dx = ix + 0.5 - cx
                dy = iy + 0.5 - cy
                dz = iz + 0.5 - cz
                if dx * dx + dy * dy + dz * dz < r * r:
                    count += 1
    return count


def digital_ball(radius):
    """Classic digital ball: voxels whose centers lie within `radius` of
    the central voxel's center (inclusive)."""
    r = int(radius)
    span = 2 * r + 1
    g = np.ogrid[0:span, 0:span, 0:span]
    dist2 = sum((gg - r) ** 2 for gg in g)
    return dist2 <= r * r
