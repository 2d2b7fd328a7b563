"""Stacked-stripe visualization of particle secondary-data ensembles.

Pipeline: synthetic voxel volumes -> threshold segmentation -> connected
component quantification -> spatial tiling -> per-tile adaptive binning
(uniform / bayesian blocks / natural breaks) -> colored stripe scenes ->
deterministic SVG, with an HTTP service and browser explorer on top.
"""

__version__ = "0.1.0"

from .binning import (BinningMethod, Histogram, bayesian_blocks_edges,
                      bin_ensemble, histogram, natural_breaks_edges,
                      sturges_bin_count, uniform_edges)
from .compose import (ColorScale, SceneModel, StripeModel, compose_stripe,
                      map_color, stack_scene)
from .density import DensityCurve, kde_curve, silverman_bandwidth
from .ingest import (EnsembleDataset, EnsembleRow, ParticleRecord,
                     ParticleTable, TileGrid, global_range, load_ensemble,
                     parse_table, split_into_tiles)
from .quantify import (ComponentStats, LabelVolume, ShapeSpec, VoxelVolume,
                       component_properties, connected_components, sphericity,
                       surface_area, synth_volume, threshold_mask)
from .svgout import render_single_histogram, render_svg
