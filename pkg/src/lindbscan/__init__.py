"""Grid-based linear-time density clustering (Lin-DBSCAN) with a DBSCAN baseline."""

from .baseline import DbscanParams, dbscan, region_query
from .engine import (
    Clustering,
    LinDbscanParams,
    filter_min_size,
    fill,
    lin_dbscan,
    parallel_lin_dbscan,
)
from .grid import Cell, Grid, build_grid, cell_coords, find_neighbors
from .heuristic import HeuristicResult, KDistSeries, gamma_from_eps, k_dist, suggest_params
from .hull import convex_hull_2d
from .validation import IndexReport, NoisePolicy, contingency, evaluate, indices

__all__ = [
    "Cell",
    "Clustering",
    "DbscanParams",
    "Grid",
    "HeuristicResult",
    "IndexReport",
    "KDistSeries",
    "LinDbscanParams",
    "NoisePolicy",
    "build_grid",
    "cell_coords",
    "contingency",
    "convex_hull_2d",
    "dbscan",
    "evaluate",
    "fill",
    "filter_min_size",
    "find_neighbors",
    "gamma_from_eps",
    "indices",
    "k_dist",
    "lin_dbscan",
    "parallel_lin_dbscan",
    "region_query",
    "suggest_params",
]
