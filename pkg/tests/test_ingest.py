import io
import json

import numpy as np
import pytest

from accustripes.errors import EmptyInputError, OutOfBoundsError, SchemaError
from accustripes.ingest import (TileGrid,
                                global_range, load_ensemble,
                                load_ensemble_from_dir,
                                load_ensemble_from_manifest, load_manifest,
                                parse_table, split_into_tiles)


class TestParseTable:
    def test_two_valid_rows(self, small_csv):
        with open(small_csv) as fh:
            table = parse_table(fh)
        assert len(table) == 2
        assert table.skipped == 0
        assert table[0].volume == 10
        assert table[0].sphericity == 95.5
        assert table[1].centroid == (4.0, 5.0, 6.0)

    def test_empty_field_skipped_and_counted(self):
        text = ("volume,sphericity,cx,cy,cz\n"
                "10,,1,1,1\n"
                "20,50.0,2,2,2\n")
        table = parse_table(io.StringIO(text))
        assert len(table) == 1
        assert table.skipped == 1
        assert table[0].volume == 20

    def test_non_finite_skipped(self):
        text = ("volume,sphericity,cx,cy,cz\n"
                "10,inf,1,1,1\n"
                "20,nan,2,2,2\n"
                "30,70,3,3,3\n")
        table = parse_table(io.StringIO(text))
        assert len(table) == 1
        assert table.skipped == 2

    def test_missing_column_names_it(self):
        text = "volume,cx,cy,cz\n1,1,1,1\n"
        with pytest.raises(SchemaError, match="sphericity"):
            parse_table(io.StringIO(text))

    def test_missing_header(self):
        with pytest.raises(SchemaError):
            parse_table(io.StringIO(""))

    def test_custom_schema(self):
        text = "vol,round,x,y,z\n7,50,1,2,3\n"
        table = parse_table(io.StringIO(text), schema={
            "volume": "vol", "sphericity": "round",
            "cx": "x", "cy": "y", "cz": "z"})
        assert table[0].volume == 7

    def test_order_preserved(self):
        rows = "\n".join(f"{v},50,0.5,0.5,0.5" for v in range(100, 200))
        table = parse_table(io.StringIO("volume,sphericity,cx,cy,cz\n" + rows))
        assert list(table.volumes) == list(range(100, 200))

    def test_paper_scale_row_count(self, tmp_path):
        # ~20.2M records parsed whole; body built from a repeated block so
        # generation stays cheap
        block_rows = 101_000
        rng = np.random.default_rng(1)
        vol = rng.integers(1, 10_000, block_rows)
        sph = rng.integers(0, 101, block_rows)
        c = rng.integers(0, 256, (block_rows, 3))
        lines = [f"{v},{s},{x},{y},{z}"
                 for v, s, (x, y, z) in zip(vol, sph, c)]
        block = "\n".join(lines) + "\n"
        path = tmp_path / "big.csv"
        with open(path, "w") as fh:
            fh.write("volume,sphericity,cx,cy,cz\n")
            for _ in range(200):
                fh.write(block)
        with open(path) as fh:
            table = parse_table(fh)
        assert len(table) == 20_200_000
        assert table.skipped == 0


class TestTileGrid:
    def test_min_corner_maps_to_first_tile(self):
        grid = TileGrid((0, 0, 0), (10, 10, 10), (2, 2, 2))
        assert grid.tile_indices([[0, 0, 0]])[0] == 0

    def test_max_corner_maps_to_last_tile(self):
        grid = TileGrid((0, 0, 0), (10, 10, 10), (2, 2, 2))
        assert grid.tile_indices([[10, 10, 10]])[0] == 7

    def test_x_fastest_order(self):
        grid = TileGrid((0, 0, 0), (10, 10, 10), (2, 2, 2))
        assert grid.tile_indices([[6, 1, 1]])[0] == 1
        assert grid.tile_indices([[1, 6, 1]])[0] == 2
        assert grid.tile_indices([[1, 1, 6]])[0] == 4

    def test_out_of_bbox_names_record(self):
        grid = TileGrid((0, 0, 0), (10, 10, 10), (1, 1, 1))
        with pytest.raises(OutOfBoundsError, match="record 1"):
            grid.tile_indices([[5, 5, 5], [11, 5, 5]])

    def test_factor_count_cube_resolves_to_3x3x6(self):
        grid = TileGrid.factor_count((0, 0, 0), (100, 100, 100), 54)
        assert grid.divisions == (3, 3, 6)

    def test_factor_count_oblong_box(self):
        # a box twice as long in z prefers more z divisions
        grid = TileGrid.factor_count((0, 0, 0), (10, 10, 80), 8)
        assert grid.divisions == (1, 1, 8)

    def test_invalid_bbox_rejected(self):
        with pytest.raises(OutOfBoundsError):
            TileGrid((0, 0, 0), (0, 10, 10), (1, 1, 1))

    def test_factor_count_always_multiplies_out(self):
        rng = np.random.default_rng(77)
        for count in (1, 2, 7, 12, 54, 60):
            ext = rng.uniform(10, 200, 3)
            grid = TileGrid.factor_count((0, 0, 0), tuple(ext), count)
            nx, ny, nz = grid.divisions
            assert nx * ny * nz == count


def _random_table(n, seed=0, box=100.0):
    rng = np.random.default_rng(seed)
    from accustripes.ingest import ParticleTable
    return ParticleTable(
        volumes=rng.integers(1, 1000, n),
        sphericities=rng.uniform(0, 100, n),
        centroids=rng.uniform(0, box, (n, 3)),
        source="synthetic",
    )


class TestSplitIntoTiles:
    def test_54_tables_for_3x3x6(self):
        table = _random_table(500)
        grid = TileGrid((0, 0, 0), (100, 100, 100), (3, 3, 6))
        tiles = split_into_tiles(table, grid)
        assert len(tiles) == 54

    def test_counts_conserved(self):
        table = _random_table(1000, seed=3)
        grid = TileGrid((0, 0, 0), (100, 100, 100), (3, 3, 6))
        tiles = split_into_tiles(table, grid)
        assert sum(len(t) for t in tiles) == 1000

    def test_partition_reproduces_input(self):
        table = _random_table(400, seed=4)
        grid = TileGrid((0, 0, 0), (100, 100, 100), (2, 3, 2))
        tiles = split_into_tiles(table, grid)
        vols = np.concatenate([t.volumes for t in tiles])
        cents = np.concatenate([t.centroids for t in tiles])
        assert sorted(vols.tolist()) == sorted(table.volumes.tolist())
        # membership is exact: each record went to the tile of its centroid
        idx = grid.tile_indices(cents)
        start = 0
        for t, tile in enumerate(tiles):
            assert np.all(idx[start:start + len(tile)] == t)
            start += len(tile)

    def test_boundary_centroid_goes_to_half_open_tile(self):
        from accustripes.ingest import ParticleTable
        table = ParticleTable([1], [50.0], [[50.0, 0.0, 0.0]], source="b")
        grid = TileGrid((0, 0, 0), (100, 100, 100), (2, 1, 1))
        tiles = split_into_tiles(table, grid)
        assert len(tiles[0]) == 0 and len(tiles[1]) == 1


def _write_tiles(tmp_path, arrays, with_manifest=True):
    entries = []
    for i, arr in enumerate(arrays):
        name = f"tile_{i:03d}.csv"
        lines = "\n".join(str(v) for v in arr)
        (tmp_path / name).write_text(f"volume\n{lines}\n")
        entries.append({"path": name, "label": f"tile_{i:03d}"})
    if with_manifest:
        (tmp_path / "manifest.json").write_text(json.dumps(entries))
    return tmp_path / "manifest.json"


class TestLoadEnsemble:
    def test_54_sources(self, tmp_path):
        rng = np.random.default_rng(5)
        arrays = [rng.integers(1, 1000, 20) for _ in range(54)]
        manifest = _write_tiles(tmp_path, arrays)
        ens = load_ensemble_from_manifest(manifest, "volume")
        assert len(ens.rows) == 54
        assert ens.global_min == min(a.min() for a in arrays)
        assert ens.global_max == max(a.max() for a in arrays)

    def test_single_value_source(self):
        ens = load_ensemble([("only", io.StringIO("volume\n7\n"))], "volume")
        assert ens.global_min == ens.global_max == 7.0

    def test_limits_match_full_rescan(self, tmp_path):
        rng = np.random.default_rng(6)
        arrays = [rng.lognormal(3, 1, 50) for _ in range(3)]
        manifest = _write_tiles(
            tmp_path, [[repr(float(v)) for v in a] for a in arrays])
        ens = load_ensemble_from_manifest(manifest, "volume")
        merged = np.concatenate([r.samples for r in ens.rows])
        assert ens.global_min == merged.min()
        assert ens.global_max == merged.max()
        assert global_range(ens) == (ens.global_min, ens.global_max)

    def test_row_order_is_manifest_order(self, tmp_path):
        (tmp_path / "b.csv").write_text("volume\n2\n")
        (tmp_path / "a.csv").write_text("volume\n1\n")
        manifest = tmp_path / "m.json"
        manifest.write_text(json.dumps([
            {"path": "b.csv", "label": "second"},
            {"path": "a.csv", "label": "first"},
        ]))
        ens = load_ensemble_from_manifest(manifest, "volume")
        assert ens.row_labels == ["second", "first"]

    def test_dir_loading_is_lexicographic(self, tmp_path):
        _write_tiles(tmp_path, [[1], [2], [3]], with_manifest=False)
        ens = load_ensemble_from_dir(tmp_path, "volume")
        assert ens.row_labels == ["tile_000", "tile_001", "tile_002"]

    def test_empty_union_rejected(self):
        with pytest.raises(EmptyInputError):
            load_ensemble([("empty", io.StringIO("volume\n"))], "volume")

    def test_parse_error_carries_label(self):
        src = [("tile_007", io.StringIO("wrong_col\n1\n"))]
        with pytest.raises(SchemaError, match="tile_007"):
            load_ensemble(src, "volume")

    def test_determinism(self, tmp_path):
        arrays = [[1, 5, 2], [9, 3]]
        manifest = _write_tiles(tmp_path, arrays)
        a = load_ensemble_from_manifest(manifest, "volume")
        b = load_ensemble_from_manifest(manifest, "volume")
        assert a.row_labels == b.row_labels
        for ra, rb in zip(a.rows, b.rows):
            assert np.array_equal(ra.samples, rb.samples)

    def test_rows_are_immutable(self):
        ens = load_ensemble([("x", io.StringIO("volume\n1\n2\n"))], "volume")
        with pytest.raises(ValueError):
            ens.rows[0].samples[0] = 99.0
