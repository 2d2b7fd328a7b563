"""Local HTTP JSON API exposing loaded ensembles and stripe computation.

Datasets are registered once and never mutated; every response is a pure
function of (dataset, request parameters), so identical requests return
byte-identical bodies and results may be memoized. Scenes for the last 64
(id, params) pairs are cached.
"""

from __future__ import annotations

import json
import os
import threading
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import binning, compose, density, svgout
from .errors import AccuStripesError, EmptyInputError, SchemaError
from .ingest import EnsembleDataset, load_ensemble, load_ensemble_from_manifest

DEFAULT_PORT = 8787
PORT_ENV_VAR = "ACCUSTRIPES_PORT"
_SCENE_CACHE_SIZE = 64


class DatasetRegistry:
    """Insert-only store of immutable ensembles behind a lock."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, EnsembleDataset] = {}
        self._next = 1

    def add(self, ensemble: EnsembleDataset) -> str:
        with self._lock:
            ds_id = f"ds-{self._next}"
            self._next += 1
            self._entries[ds_id] = ensemble
        return ds_id

    def get(self, ds_id: str) -> EnsembleDataset:
        with self._lock:
            entry = self._entries.get(ds_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {ds_id}")
        return entry

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._entries)


def dataset_meta(ds_id: str, ens: EnsembleDataset) -> dict:
    return {
        "id": ds_id,
        "property": ens.property_name,
        "rowCount": len(ens.rows),
        "globalMin": ens.global_min,
        "globalMax": ens.global_max,
        "rows": [{"label": r.label, "n": int(r.samples.size)} for r in ens.rows],
    }


@dataclass(frozen=True)
class StripeParams:
    """Validated stripe-request parameters; doubles as the cache key."""

    method: str = binning.UNIFORM
    composition: str = compose.COLOR_ONLY
    mode: str = compose.LINEAR
    normalization: str = compose.GLOBAL
    p0: float = 0.05
    class_count: int | None = None
    zoom: tuple[float, float] | None = None
    curve_scale: str = "row"


def _bad(name: str, value) -> HTTPException:
    return HTTPException(status_code=400,
                         detail=f"invalid value for {name!r}: {value!r}")


def parse_params(method: str, composition: str, mode: str, normalization: str,
                 p0: float, classes: int | None, lo: float | None,
                 hi: float | None, curve_scale: str) -> StripeParams:
    if method not in (binning.UNIFORM, binning.BAYESIAN_BLOCKS,
                      binning.NATURAL_BREAKS):
        raise _bad("method", method)
    if composition not in compose.COMPOSITIONS:
        raise _bad("composition", composition)
    if mode not in (compose.LINEAR, compose.LOG1P):
        raise _bad("mode", mode)
    if normalization not in (compose.GLOBAL, compose.PER_ROW):
        raise _bad("normalization", normalization)
    if not 0.0 < p0 < 1.0:
        raise _bad("p0", p0)
    if classes is not None and classes < 1:
        raise _bad("classes", classes)
    if curve_scale not in ("row", "global"):
        raise _bad("curveScale", curve_scale)
    zoom = None
    if lo is not None or hi is not None:
        if lo is None or hi is None or not lo < hi:
            raise _bad("range", (lo, hi))
        zoom = (float(lo), float(hi))
    return StripeParams(method, composition, mode, normalization,
                        float(p0), classes, zoom, curve_scale)


def _effective_limits(ens: EnsembleDataset,
                      params: StripeParams) -> tuple[float, float]:
    lo, hi = params.zoom if params.zoom else (ens.global_min, ens.global_max)
    if not lo < hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _row_curves(ens: EnsembleDataset, params: StripeParams,
                limits: tuple[float, float]) -> list[density.DensityCurve | None]:
    grange = ens.global_max - ens.global_min
    curves = []
    for row in ens.rows:
        x = row.samples
        if params.zoom:
            x = x[(x >= params.zoom[0]) & (x <= params.zoom[1])]
        curves.append(density.row_density(x, limits, grange) if x.size else None)
    return curves


def build_scene(ens: EnsembleDataset, params: StripeParams) -> compose.SceneModel:
    """Full pipeline: bin -> curves (if needed) -> compose -> stack."""
    method = binning.BinningMethod(kind=params.method, p0=params.p0,
                                   class_count=params.class_count)
    hists = binning.bin_ensemble(ens, method, params.zoom)
    limits = _effective_limits(ens, params)
    scales = compose.resolve_scales(hists, params.mode, params.normalization)

    needs_curve = params.composition != compose.COLOR_ONLY
    curves = _row_curves(ens, params, limits) if needs_curve else [None] * len(hists)
    peak = None
    if needs_curve and params.curve_scale == "global":
        peak = max((float(c.ys.max()) for c in curves if c is not None),
                   default=None)

    stripes = []
    for row, hist, curve, scale in zip(ens.rows, hists, curves, scales):
        if needs_curve and curve is None:
            # row emptied by zoom: nothing to estimate, draw it color-only
            stripes.append(compose.compose_stripe(
                hist, None, compose.COLOR_ONLY, scale, label=row.label))
        else:
            stripes.append(compose.compose_stripe(
                hist, curve, params.composition, scale, label=row.label,
                curve_peak=peak))
    return compose.stack_scene(stripes, limits)


def _canonical_json(obj) -> bytes:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False).encode()


class SceneCache:
    """Tiny LRU of rendered scene bytes keyed by (dataset id, params)."""

    def __init__(self, maxsize: int = _SCENE_CACHE_SIZE):
        self._lock = threading.Lock()
        self._data: OrderedDict = OrderedDict()
        self.maxsize = maxsize

    def get_or_build(self, key, build):
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                return self._data[key]
        value = build()
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)
        return value


class SourceSpec(BaseModel):
    label: str
    csv: str


class LoadRequest(BaseModel):
    property: str
    manifest: str | None = None
    sources: list[SourceSpec] | None = None


def create_app(static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="accustripes")
    registry = DatasetRegistry()
    scene_cache = SceneCache()
    svg_cache = SceneCache()
    app.state.registry = registry

    @app.post("/datasets")
    def handle_load(req: LoadRequest):
        import io

        try:
            if req.manifest is not None:
                ens = load_ensemble_from_manifest(req.manifest, req.property)
            elif req.sources:
                pairs = [(s.label, io.StringIO(s.csv)) for s in req.sources]
                ens = load_ensemble(pairs, req.property)
            else:
                raise HTTPException(status_code=400,
                                    detail="need 'manifest' or 'sources'")
        except FileNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except (SchemaError, EmptyInputError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        ds_id = registry.add(ens)
        return dataset_meta(ds_id, ens)

    @app.get("/datasets")
    def handle_list():
        return [dataset_meta(i, registry.get(i)) for i in registry.ids()]

    def _params(method: str = binning.UNIFORM,
                composition: str = compose.COLOR_ONLY,
                mode: str = compose.LINEAR,
                normalization: str = compose.GLOBAL,
                p0: float = 0.05, classes: int | None = None,
                lo: float | None = None, hi: float | None = None,
                curveScale: str = "row") -> StripeParams:
        return parse_params(method, composition, mode, normalization,
                            p0, classes, lo, hi, curveScale)

    def _scene_bytes(ds_id: str, params: StripeParams) -> bytes:
        ens = registry.get(ds_id)

        def build():
            try:
                return _canonical_json(build_scene(ens, params).to_json())
            except AccuStripesError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None

        return scene_cache.get_or_build((ds_id, params), build)

    @app.get("/datasets/{ds_id}/stripes")
    def handle_stripes(ds_id: str, method: str = binning.UNIFORM,
                       composition: str = compose.COLOR_ONLY,
                       mode: str = compose.LINEAR,
                       normalization: str = compose.GLOBAL,
                       p0: float = 0.05, classes: int | None = None,
                       lo: float | None = None, hi: float | None = None,
                       curveScale: str = "row"):
        params = _params(method, composition, mode, normalization, p0,
                         classes, lo, hi, curveScale)
        body = _scene_bytes(ds_id, params)
        return Response(content=body, media_type="application/json")

    @app.get("/datasets/{ds_id}/rows/{index}")
    def handle_row_detail(ds_id: str, index: int,
                          method: str = binning.UNIFORM, p0: float = 0.05,
                          classes: int | None = None,
                          lo: float | None = None, hi: float | None = None):
        params = _params(method=method, p0=p0, classes=classes, lo=lo, hi=hi)
        ens = registry.get(ds_id)
        if not 0 <= index < len(ens.rows):
            raise HTTPException(status_code=404,
                                detail=f"row {index} out of range")
        bmethod = binning.BinningMethod(kind=params.method, p0=params.p0,
                                        class_count=params.class_count)
        hist = binning.bin_ensemble(ens, bmethod, params.zoom)[index]
        row = ens.rows[index]
        x = row.samples
        if params.zoom:
            x = x[(x >= params.zoom[0]) & (x <= params.zoom[1])]
        limits = _effective_limits(ens, params)
        curve = None
        if x.size:
            curve = density.row_density(
                x, limits, ens.global_max - ens.global_min).to_json()
        stats = {
            "n": int(x.size),
            "min": float(x.min()) if x.size else None,
            "max": float(x.max()) if x.size else None,
            "mean": float(x.mean()) if x.size else None,
            "median": float(np.median(x)) if x.size else None,
        }
        body = _canonical_json({
            "label": row.label,
            "histogram": hist.to_json(),
            "curve": curve,
            "stats": stats,
        })
        return Response(content=body, media_type="application/json")

    @app.get("/datasets/{ds_id}/render.svg")
    def handle_render_svg(ds_id: str, method: str = binning.UNIFORM,
                          composition: str = compose.COLOR_ONLY,
                          mode: str = compose.LINEAR,
                          normalization: str = compose.GLOBAL,
                          p0: float = 0.05, classes: int | None = None,
                          lo: float | None = None, hi: float | None = None,
                          curveScale: str = "row"):
        params = _params(method, composition, mode, normalization, p0,
                         classes, lo, hi, curveScale)
        ens = registry.get(ds_id)

        def build():
            try:
                return svgout.render_svg(build_scene(ens, params)).encode()
            except AccuStripesError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None

        body = svg_cache.get_or_build((ds_id, params), build)
        return Response(content=body, media_type="image/svg+xml")

    if static_dir is None:
        bundled = Path(__file__).parent / "static"
        static_dir = bundled if bundled.is_dir() else None
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")
    return app


def resolve_port(flag_port: int | None = None) -> int:
    if flag_port is not None:
        return flag_port
    env = os.environ.get(PORT_ENV_VAR)
    return int(env) if env else DEFAULT_PORT


def serve(app: FastAPI | None = None, host: str = "127.0.0.1",
          port: int | None = None):
    import uvicorn

    uvicorn.run(app if app is not None else create_app(),
                host=host, port=resolve_port(port))
