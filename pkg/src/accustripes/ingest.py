"""CSV ingestion: particle tables, spatial tiling, and ensemble assembly.

A quantified scan arrives as one large CSV of per-particle properties.
This module parses such tables, splits them into spatial tiles by
centroid, and assembles per-tile sample collections into an ensemble
sharing one global value range.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import EmptyInputError, OutOfBoundsError, SchemaError

# canonical field -> CSV column name
DEFAULT_SCHEMA = {
    "volume": "volume",
    "sphericity": "sphericity",
    "cx": "cx",
    "cy": "cy",
    "cz": "cz",
}


@dataclass(frozen=True)
class ParticleRecord:
    """One labeled component: voxel volume, sphericity percent, centroid."""

    volume: int
    sphericity: float
    centroid: tuple[float, float, float]


class ParticleTable:
    """Ordered collection of particle records, stored column-wise.

    Tables routinely hold tens of millions of rows, so fields live in
    numpy arrays; records materialize lazily on indexing.
    """

    def __init__(self, volumes, sphericities, centroids, source: str = "",
                 skipped: int = 0):
        self.volumes = np.asarray(volumes, dtype=np.int64)
        self.sphericities = np.asarray(sphericities, dtype=float)
        self.centroids = np.asarray(centroids, dtype=float).reshape(-1, 3)
        self.source = source
        self.skipped = int(skipped)
        if not (len(self.volumes) == len(self.sphericities)
                == len(self.centroids)):
            raise ValueError("column lengths disagree")

    def __len__(self) -> int:
        return len(self.volumes)

    def __getitem__(self, i: int) -> ParticleRecord:
        return ParticleRecord(
            volume=int(self.volumes[i]),
            sphericity=float(self.sphericities[i]),
            centroid=tuple(self.centroids[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def column(self, name: str) -> np.ndarray:
        if name == "volume":
            return self.volumes
        if name == "sphericity":
            return self.sphericities
        if name in ("cx", "cy", "cz"):
            return self.centroids[:, ("cx", "cy", "cz").index(name)]
        raise SchemaError(f"unknown column {name!r}")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "volume": self.volumes,
            "sphericity": self.sphericities,
            "cx": self.centroids[:, 0],
            "cy": self.centroids[:, 1],
            "cz": self.centroids[:, 2],
        })


def parse_table(stream, schema: dict[str, str] | None = None) -> ParticleTable:
    """Parse a delimited text stream into a ParticleTable.

    The header row must name every mapped column. Rows with missing or
    non-finite values in any mapped column are skipped and counted in
    the table's `skipped` attribute; row order is otherwise preserved.
    """
    schema = dict(DEFAULT_SCHEMA if schema is None else schema)
    source = getattr(stream, "name", "")
    try:
        df = pd.read_csv(stream)
    except pd.errors.EmptyDataError:
        raise SchemaError("stream has no header row") from None
    for col in schema.values():
        if col not in df.columns:
            raise SchemaError(f"missing column {col!r}")
    cols = {
        key: pd.to_numeric(df[col], errors="coerce").to_numpy(dtype=float)
        for key, col in schema.items()
    }
    ok = np.ones(len(df), dtype=bool)
    for arr in cols.values():
        ok &= np.isfinite(arr)
    skipped = int(len(df) - ok.sum())
    centroids = np.column_stack([cols["cx"][ok], cols["cy"][ok], cols["cz"][ok]])
    return ParticleTable(
        volumes=cols["volume"][ok].astype(np.int64),
        sphericities=cols["sphericity"][ok],
        centroids=centroids,
        source=str(source),
        skipped=skipped,
    )


@dataclass(frozen=True)
class TileGrid:
    """Axis-aligned bounding box split into nx*ny*nz disjoint tiles.

    Tile intervals are half-open [lo, hi) per axis with the last
    interval closed, so boundary centroids land deterministically.
    Flat tile order runs x fastest, then y, then z.
    """

    bbox_min: tuple[float, float, float]
    bbox_max: tuple[float, float, float]
    divisions: tuple[int, int, int]

    def __post_init__(self):
        for lo, hi in zip(self.bbox_min, self.bbox_max):
            if not lo < hi:
                raise OutOfBoundsError(f"bbox must have min < max, got {lo}, {hi}")
        if any(n < 1 for n in self.divisions):
            raise OutOfBoundsError("divisions must be positive")

    @property
    def tile_count(self) -> int:
        nx, ny, nz = self.divisions
        return nx * ny * nz

    @staticmethod
    def factor_count(bbox_min, bbox_max, count: int) -> "TileGrid":
        """Grid with `count` tiles whose edge lengths are as close to a
        cube as the box allows (smallest max/min tile-edge ratio; ties
        go to the lexicographically smallest division triple)."""
        if count < 1:
            raise OutOfBoundsError("tile count must be positive")
        extent = [hi - lo for lo, hi in zip(bbox_min, bbox_max)]
        best = None
        for nx in range(1, count + 1):
            if count % nx:
                continue
            rest = count // nx
            for ny in range(1, rest + 1):
                if rest % ny:
                    continue
                nz = rest // ny
                edges = (extent[0] / nx, extent[1] / ny, extent[2] / nz)
                score = max(edges) / min(edges)
                key = (score, (nx, ny, nz))
                if best is None or key < best:
                    best = key
        return TileGrid(tuple(bbox_min), tuple(bbox_max), best[1])

    def tile_indices(self, centroids: np.ndarray) -> np.ndarray:
        """Flat tile index for each centroid; raises on out-of-box points."""
        pts = np.asarray(centroids, dtype=float).reshape(-1, 3)
        lo = np.asarray(self.bbox_min)
        hi = np.asarray(self.bbox_max)
        inside = np.all((pts >= lo) & (pts <= hi), axis=1)
        if not inside.all():
            bad = int(np.flatnonzero(~inside)[0])
            raise OutOfBoundsError(
                f"record {bad}: centroid {tuple(pts[bad])} outside bounding box"
            )
        div = np.asarray(self.divisions)
        frac = (pts - lo) / (hi - lo)
        axis_idx = np.minimum((frac * div).astype(np.int64), div - 1)
        nx, ny, _ = self.divisions
        return axis_idx[:, 0] + nx * (axis_idx[:, 1] + ny * axis_idx[:, 2])


def split_into_tiles(table: ParticleTable, grid: TileGrid) -> list[ParticleTable]:
    """Partition a table into one table per tile by centroid location.

    Output order is tile index order (x fastest, then y, then z); record
    order inside each tile follows the input.
    """
    flat = grid.tile_indices(table.centroids)
    order = np.argsort(flat, kind="stable")
    sorted_idx = flat[order]
    bounds = np.searchsorted(sorted_idx, np.arange(grid.tile_count + 1))
    out = []
    for t in range(grid.tile_count):
        sel = order[bounds[t]:bounds[t + 1]]
        out.append(ParticleTable(
            volumes=table.volumes[sel],
            sphericities=table.sphericities[sel],
            centroids=table.centroids[sel],
            source=f"{table.source}#tile_{t:03d}" if table.source else f"tile_{t:03d}",
        ))
    return out


@dataclass(frozen=True)
class EnsembleRow:
    """One labeled sample collection (usually one spatial tile)."""

    label: str
    samples: np.ndarray
    skipped: int = 0

    def __post_init__(self):
        object.__setattr__(self, "samples",
                           np.asarray(self.samples, dtype=float).ravel())


@dataclass(frozen=True)
class EnsembleDataset:
    """Ordered rows of univariate samples sharing global limits."""

    rows: tuple[EnsembleRow, ...]
    global_min: float
    global_max: float
    property_name: str

    @staticmethod
    def from_rows(rows, property_name: str) -> "EnsembleDataset":
        rows = tuple(rows)
        gmin = math.inf
        gmax = -math.inf
        total = 0
        for row in rows:
            row.samples.setflags(write=False)
            if row.samples.size:
                gmin = min(gmin, float(row.samples.min()))
                gmax = max(gmax, float(row.samples.max()))
                total += row.samples.size
        if total == 0:
            raise EmptyInputError("ensemble has no samples in any row")
        return EnsembleDataset(rows, gmin, gmax, property_name)

    @property
    def row_labels(self) -> list[str]:
        return [r.label for r in self.rows]


def global_range(ensemble: EnsembleDataset) -> tuple[float, float]:
    """Stored global (min, max) over all rows."""
    return ensemble.global_min, ensemble.global_max


def _read_property_column(stream, column: str) -> tuple[np.ndarray, int]:
    try:
        df = pd.read_csv(stream)
    except pd.errors.EmptyDataError:
        raise SchemaError("stream has no header row") from None
    if column not in df.columns:
        raise SchemaError(f"missing column {column!r}")
    values = pd.to_numeric(df[column], errors="coerce").to_numpy(dtype=float)
    ok = np.isfinite(values)
    return values[ok], int(len(values) - ok.sum())


def load_ensemble(sources, property_name: str) -> EnsembleDataset:
    """Assemble an ensemble from ordered (label, stream-or-path) sources.

    Each source is parsed like parse_table restricted to the property
    column; global limits accumulate in the same pass. Any parse error
    is re-raised with the offending source label attached.
    """
    sources = list(sources)
    if not sources:
        raise EmptyInputError("no sources given")
    rows = []
    for label, src in sources:
        try:
            if isinstance(src, (str, Path)):
                with open(src, "r", encoding="utf-8") as fh:
                    samples, skipped = _read_property_column(fh, property_name)
            else:
                samples, skipped = _read_property_column(src, property_name)
        except SchemaError as exc:
            raise SchemaError(f"{label}: {exc}") from None
        rows.append(EnsembleRow(label=str(label), samples=samples, skipped=skipped))
    return EnsembleDataset.from_rows(rows, property_name)


def load_manifest(path) -> list[tuple[str, Path]]:
    """Read a JSON manifest: array of {path, label}, paths relative to it."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        entries = json.load(fh)
    if not isinstance(entries, list):
        raise SchemaError("manifest must be a JSON array")
    out = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "path" not in entry:
            raise SchemaError(f"manifest entry {i} lacks a 'path' field")
        rel = Path(entry["path"])
        label = str(entry.get("label", rel.stem))
        out.append((label, path.parent / rel))
    return out


def load_ensemble_from_manifest(path, property_name: str) -> EnsembleDataset:
    return load_ensemble(load_manifest(path), property_name)


def load_ensemble_from_dir(directory, property_name: str,
                           pattern: str = "*.csv") -> EnsembleDataset:
    """Load every matching file in lexicographic name order."""
    files = sorted(Path(directory).glob(pattern))
    if not files:
        raise EmptyInputError(f"no files matching {pattern!r} in {directory}")
    return load_ensemble([(f.stem, f) for f in files], property_name)
