"""Classic DBSCAN used as the quality and timing reference."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .engine import Clustering
from .grid import as_points, build_grid, find_neighbors

BACKENDS = ("kdtree", "grid", "brute")

_UNSEEN = -2
_NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    eps: float
    min_pts: int = 4

    def __post_init__(self):
        if not np.isfinite(self.eps) or self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise ValueError(f"min_pts must be an integer >= 1, got {self.min_pts!r}")


def region_query(points, center_index: int, eps: float) -> np.ndarray:
    """Sorted indices of all points within ``eps`` of the center, itself included."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = as_points(points)
    d2 = np.sum((pts - pts[center_index]) ** 2, axis=1)
    return np.flatnonzero(d2 <= eps * eps)


class _Brute:
    def __init__(self, pts, eps):
        self.pts, self.eps2 = pts, eps * eps

    def __call__(self, i):
        d2 = np.sum((self.pts - self.pts[i]) ** 2, axis=1)
        return np.flatnonzero(d2 <= self.eps2).tolist()


class _KDTree:
    def __init__(self, pts, eps):
        self.pts, self.eps = pts, eps
        self.tree = cKDTree(pts)

    def __call__(self, i):
        # query_ball_point is inclusive (<= r) like the brute-force scan
        return self.tree.query_ball_point(self.pts[i], self.eps)


class _GridIndex:
    """Buckets of side just over ``eps``: every eps-neighbour lies in the Moore neighbourhood.

    The margin covers pairs at distance exactly ``eps`` whose coordinates
    round into buckets two apart.
    """

    def __init__(self, pts, eps):
        self.pts, self.eps2 = pts, eps * eps
        self.grid = build_grid(pts, eps * (1 + 1e-6))
        self.cell_of = {}
        for cell in self.grid.cells.values():
            for i in cell.points.tolist():
                self.cell_of[i] = cell

    def __call__(self, i):
        cands = np.concatenate([c.points for c in find_neighbors(self.grid, self.cell_of[i])])
        d2 = np.sum((self.pts[cands] - self.pts[i]) ** 2, axis=1)
        return cands[d2 <= self.eps2].tolist()


def _make_index(pts, eps, backend):
    if backend == "kdtree":
        return _KDTree(pts, eps)
    if backend == "grid":
        return _GridIndex(pts, eps)
    if backend == "brute":
        return _Brute(pts, eps)
    raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")


def dbscan(points, params: DbscanParams, backend: str = "kdtree") -> Clustering:
    """Density-based clustering with an ``eps`` ball and a ``min_pts`` core test.

    Points are scanned in row order. A point is core when its closed
    ``eps`` ball (itself included) holds at least ``min_pts`` points. A
    border point joins the first cluster that reaches it. The partition
    does not depend on the backend used for neighbourhood queries.
    """
    start = time.perf_counter()
    pts = as_points(points)
    n = len(pts)
    if n == 0:
        return Clustering([], np.empty(0, np.int64), params, 0, 0, time.perf_counter() - start,
                          extra={"backend": backend, "core": np.empty(0, np.int64)})
    query = _make_index(pts, params.eps, backend)
    min_pts = params.min_pts
    labels = [_UNSEEN] * n
    core = [False] * n
    cid = 0
    for i in range(n):
        if labels[i] != _UNSEEN:
            continue
        nbrs = query(i)
        if len(nbrs) < min_pts:
            labels[i] = _NOISE
            continue
        core[i] = True
        labels[i] = cid
        seeds = list(nbrs)
        for j in seeds:
            lab = labels[j]
            if lab == _NOISE:
                labels[j] = cid
            if lab != _UNSEEN:
                continue
            labels[j] = cid
            nbrs_j = query(j)
            if len(nbrs_j) >= min_pts:
                core[j] = True
                seeds.extend(nbrs_j)
        cid += 1

    lab = np.asarray(labels, dtype=np.int64)
    # every point is queried exactly once, so the core flags are exact
    return Clustering(
        clusters=_group(lab, cid),
        noise=np.flatnonzero(lab == _NOISE),
        params=params,
        n_points=n,
        elapsed=time.perf_counter() - start,
        extra={"backend": backend, "core": np.flatnonzero(core)},
    )


def _group(lab: np.ndarray, k: int) -> list[np.ndarray]:
    if k == 0:
        return []
    order = np.argsort(lab, kind="stable")
    counts = np.bincount(lab[lab >= 0], minlength=k)
    start = int(np.sum(lab < 0))
    return np.split(order[start:], np.cumsum(counts)[:-1])


def core_points(points, eps: float, min_pts: int) -> np.ndarray:
    """Indices whose closed ``eps`` ball holds at least ``min_pts`` points."""
    pts = as_points(points)
    if len(pts) == 0:
        return np.empty(0, np.int64)
    counts = np.array([len(c) for c in cKDTree(pts).query_ball_point(pts, eps)])
    return np.flatnonzero(counts >= min_pts)
