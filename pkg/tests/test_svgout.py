import math
import re
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from accustripes.binning import Histogram
from accustripes.compose import (COLOR_ONLY, GLOBAL, LINEAR, ColorScale,
                                 Layout, compose_stripe, stack_scene)
from accustripes.errors import LayoutError
from accustripes.svgout import render_single_histogram, render_svg

GOLDEN = Path(__file__).parent / "golden"


def _hist(counts, lo=0.0, hi=None):
    counts = np.asarray(counts, dtype=np.int64)
    hi = float(len(counts)) if hi is None else hi
    return Histogram(edges=np.linspace(lo, hi, len(counts) + 1),
                     counts=counts, n=int(counts.sum()))


def _three_row_scene():
    hists = [_hist([5, 0, 3, 1], 0.0, 100.0),
             _hist([2, 2, 2, 2], 0.0, 100.0),
             _hist([0, 9, 1, 0], 0.0, 100.0)]
    scale = ColorScale(LINEAR, GLOBAL, 9)
    stripes = [
        compose_stripe(h, None, COLOR_ONLY, scale, label=f"tile_{i:03d}")
        for i, h in enumerate(hists)
    ]
    return stack_scene(stripes, (0.0, 100.0))


class TestRenderSvg:
    def test_deterministic_bytes(self):
        scene = _three_row_scene()
        assert render_svg(scene) == render_svg(scene)

    def test_parses_as_xml(self):
        root = ET.fromstring(render_svg(_three_row_scene()))
        assert root.tag.endswith("svg")

    def test_single_black_rect(self):
        h = _hist([0])
        stripe = compose_stripe(h, None, COLOR_ONLY, ColorScale(LINEAR, GLOBAL, 1))
        svg = render_svg(stack_scene([stripe], (0.0, 1.0)))
        assert svg.count("#000000") == 1

    def test_three_decimal_formatting(self):
        svg = render_svg(_three_row_scene())
        attrs = r'(?<![-\w])(?:x|y|width|height|x1|x2|y1|y2)="([^"]+)"'
        count = 0
        for m in re.finditer(attrs, svg):
            count += 1
            assert re.fullmatch(r"-?\d+\.\d{3}", m.group(1)), m.group(0)
        assert count > 20

    def test_zero_area_rejected(self):
        scene = _three_row_scene()
        broken = stack_scene(scene.stripes, (0.0, 100.0),
                             Layout(stripe_height=0.0))
        with pytest.raises(LayoutError):
            render_svg(broken)

    def test_golden_three_row_fixture(self):
        # frozen from the first visually reviewed build
        want = (GOLDEN / "scene_3row.svg").read_text()
        assert render_svg(_three_row_scene()) == want

    def test_labels_are_xml_escaped(self):
        h = _hist([1], 0.0, 10.0)
        stripe = compose_stripe(h, None, COLOR_ONLY,
                                ColorScale(LINEAR, GLOBAL, 1),
                                label='<tile> "a" & b')
        svg = render_svg(stack_scene([stripe], (0.0, 10.0)))
        root = ET.fromstring(svg)
        texts = [t.text for t in root.iter() if t.tag.endswith("text")]
        assert '<tile> "a" & b' in texts


def _bar_heights(svg):
    heights = []
    for m in re.finditer(r'<rect x="[^"]+" y="[^"]+" width="[^"]+" '
                         r'height="([^"]+)" fill="#46327e"', svg):
        heights.append(float(m.group(1)))
    return heights


class TestRenderSingleHistogram:
    def test_log_bar_heights(self):
        svg = render_single_histogram(_hist([10, 1, 0]), "logY")
        heights = _bar_heights(svg)
        assert len(heights) == 2  # zero-count bin draws no bar
        ratio = heights[1] / heights[0]
        assert ratio == pytest.approx(math.log10(2) / math.log10(11), abs=1e-3)

    def test_equal_counts_equal_heights(self):
        svg = render_single_histogram(_hist([4, 4, 4]), "linearY")
        heights = _bar_heights(svg)
        assert len(heights) == 3
        assert max(heights) - min(heights) < 1e-9

    def test_heavy_tail_shape(self):
        rng = np.random.default_rng(91)
        data = rng.lognormal(0.0, 1.0, 20_000)
        edges = np.linspace(data.min(), data.max(), 27)
        counts, _ = np.histogram(data, bins=edges)
        h = Histogram(edges=edges, counts=counts.astype(np.int64),
                      n=int(counts.sum()))
        svg = render_single_histogram(h, "logY")
        heights = _bar_heights(svg)
        assert heights[0] == max(heights)  # tallest bar leftmost

    def test_deterministic(self):
        h = _hist([3, 1, 4])
        assert (render_single_histogram(h, "logY")
                == render_single_histogram(h, "logY"))
