"""Batch entry point: synthesize, quantify, split, render, stats, serve.

All subcommands write output files atomically (temp file + rename) and
derive any randomness from an explicit seed, so reruns are reproducible
byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import binning, compose, svgout
from .errors import AccuStripesError
from .ingest import TileGrid, load_ensemble_from_manifest, parse_table, split_into_tiles
from .quantify import ShapeSpec, VoxelVolume, quantify_volume, synth_volume


def _atomic_write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_synth(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    shapes = [ShapeSpec.from_json(s) for s in spec.get("shapes", [])]
    seed = args.seed if args.seed is not None else int(spec.get("seed", 0))
    vol = synth_volume(
        shapes,
        dims=spec["dims"],
        noise_sigma=float(spec.get("noiseSigma", 0.0)),
        seed=seed,
    )
    out = Path(args.out)
    import io

    buf = io.BytesIO()
    np.savez_compressed(buf, values=vol.values)
    _atomic_write(out, buf.getvalue())
    print(f"wrote volume {vol.dims} -> {out}")
    return 0


def _cmd_quantify(args) -> int:
    with np.load(args.infile) as data:
        vol = VoxelVolume(values=data["values"])
    table = quantify_volume(vol, threshold=args.threshold,
                            connectivity=args.connectivity,
                            estimator=args.estimator)
    csv_text = table.to_frame().to_csv(index=False)
    _atomic_write(Path(args.out), csv_text.encode())
    print(f"quantified {len(table)} components -> {args.out}")
    return 0


def _parse_grid(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like 3x3x6")
    return tuple(int(p) for p in parts)


def _cmd_split(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        table = parse_table(fh)
    if len(table) == 0:
        print("error: input table has no records", file=sys.stderr)
        return 1
    if args.bbox:
        lo_s, hi_s = args.bbox.split(":")
        bbox_min = tuple(float(v) for v in lo_s.split(","))
        bbox_max = tuple(float(v) for v in hi_s.split(","))
    else:
        bbox_min = tuple(table.centroids.min(axis=0))
        bbox_max = tuple(table.centroids.max(axis=0))
    if args.grid:
        grid = TileGrid(bbox_min, bbox_max, args.grid)
    else:
        grid = TileGrid.factor_count(bbox_min, bbox_max, args.tiles)

    outdir = Path(args.outdir)
    tiles = split_into_tiles(table, grid)
    manifest = []
    for t, tile in enumerate(tiles):
        name = f"tile_{t:03d}.csv"
        _atomic_write(outdir / name, tile.to_frame().to_csv(index=False).encode())
        manifest.append({"path": name, "label": f"tile_{t:03d}"})
    _atomic_write(outdir / "manifest.json",
                  (json.dumps(manifest, indent=2) + "\n").encode())
    nx, ny, nz = grid.divisions
    print(f"split {len(table)} records into {len(tiles)} tiles "
          f"({nx}x{ny}x{nz}) -> {outdir}")
    return 0


def _parse_range(text: str) -> tuple[float, float]:
    lo_s, hi_s = text.split(":")
    return float(lo_s), float(hi_s)


def _cmd_render(args) -> int:
    from .service import StripeParams, build_scene

    ens = load_ensemble_from_manifest(args.manifest, args.property)
    params = StripeParams(
        method=args.method,
        composition=args.composition,
        mode=args.color_mode,
        normalization=args.normalization,
        p0=args.p0,
        class_count=args.classes,
        zoom=args.range,
    )
    svg = svgout.render_svg(build_scene(ens, params))
    _atomic_write(Path(args.out), svg.encode())
    print(f"rendered {len(ens.rows)} stripes ({args.method}, "
          f"{args.composition}) -> {args.out}")
    return 0


def _cmd_stats(args) -> int:
    ens = load_ensemble_from_manifest(args.manifest, args.property)
    sizes = [r.samples.size for r in ens.rows]
    total = int(sum(sizes))
    nmax = int(max(sizes))
    print(f"property: {ens.property_name}")
    print(f"rows: {len(ens.rows)}")
    print(f"samples: {total}")
    print(f"global range: [{ens.global_min:g}, {ens.global_max:g}]")
    print(f"max row n: {nmax}")
    print(f"sturges k: {binning.sturges_bin_count(nmax)}")
    return 0


def _cmd_serve(args) -> int:
    from .service import create_app, serve

    serve(create_app(static_dir=args.static), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accustripes",
        description="Stacked-stripe analysis of particle secondary data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic voxel volume")
    p.add_argument("--spec", required=True, help="JSON shape fixture")
    p.add_argument("--seed", type=int, default=None,
                   help="override the fixture seed")
    p.add_argument("--out", required=True, help="output .npz volume")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("quantify", help="threshold, label, and measure a volume")
    p.add_argument("--in", dest="infile", required=True, help=".npz volume")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--connectivity", type=int, choices=(6, 26), default=26)
    p.add_argument("--estimator", choices=("crofton", "faceCount"),
                   default="crofton")
    p.add_argument("--out", required=True, help="output particle CSV")
    p.set_defaults(func=_cmd_quantify)

    p = sub.add_parser("split", help="split a particle CSV into spatial tiles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tiles", type=int, default=54)
    p.add_argument("--grid", type=_parse_grid, default=None,
                   help="explicit divisions, e.g. 3x3x6")
    p.add_argument("--bbox", default=None,
                   help="x0,y0,z0:x1,y1,z1 (default: centroid extent)")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("render", help="render stacked stripes to SVG")
    p.add_argument("--manifest", required=True)
    p.add_argument("--property", required=True)
    p.add_argument("--method", choices=(binning.UNIFORM,
                                        binning.BAYESIAN_BLOCKS,
                                        binning.NATURAL_BREAKS),
                   default=binning.UNIFORM)
    p.add_argument("--composition", choices=compose.COMPOSITIONS,
                   default=compose.COLOR_ONLY)
    p.add_argument("--color-mode", choices=(compose.LINEAR, compose.LOG1P),
                   default=compose.LINEAR)
    p.add_argument("--normalization", choices=(compose.GLOBAL, compose.PER_ROW),
                   default=compose.GLOBAL)
    p.add_argument("--p0", type=float, default=0.05)
    p.add_argument("--classes", type=int, default=None)
    p.add_argument("--range", type=_parse_range, default=None,
                   help="zoom range lo:hi")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("stats", help="print ensemble summary statistics")
    p.add_argument("--manifest", required=True)
    p.add_argument("--property", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None,
                   help="default 8787, or $ACCUSTRIPES_PORT")
    p.add_argument("--static", default=None, help="UI asset directory")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AccuStripesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
