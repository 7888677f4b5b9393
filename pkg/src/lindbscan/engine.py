"""Lin-DBSCAN: connected components of dense grid cells."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import Cell, Grid, as_points, build_grid, find_neighbors


@dataclass(frozen=True)
class LinDbscanParams:
    gamma: float
    min_pts: int = 1

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise ValueError(f"min_pts must be an integer >= 1, got {self.min_pts!r}")


@dataclass
class Clustering:
    """Partition of row indices ``0..n-1`` into clusters plus noise.

    ``clusters[i]`` is the sorted index array of cluster ``i``.
    """

    clusters: list[np.ndarray]
    noise: np.ndarray
    params: object = None
    n_points: int = 0
    n_cells: int = 0
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    @property
    def n_noise(self) -> int:
        return len(self.noise)

    def labels(self) -> np.ndarray:
        """Per-row cluster id, ``-1`` for noise."""
        out = np.full(self.n_points, -1, dtype=np.int64)
        for cid, members in enumerate(self.clusters):
            out[members] = cid
        return out

    def partition(self) -> frozenset[frozenset[int]]:
        """Clusters as a set of point-index sets (ignores numbering)."""
        return frozenset(frozenset(c.tolist()) for c in self.clusters)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.clusters]

    @classmethod
    def from_labels(cls, labels, **kwargs) -> "Clustering":
        """Build from a label vector where negative ids mean noise.

        Clusters are numbered by their smallest row index.
        """
        labels = np.asarray(labels)
        n = len(labels)
        noise = np.flatnonzero(labels < 0)
        clusters = []
        if n:
            ids = labels[labels >= 0]
            rows = np.flatnonzero(labels >= 0)
            uniq, first = np.unique(ids, return_index=True)
            for lab in uniq[np.argsort(rows[first], kind="stable")]:
                clusters.append(np.flatnonzero(labels == lab))
        return cls(clusters=clusters, noise=noise, n_points=n, **kwargs)


def _noise_from(clusters: list[np.ndarray], n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    for members in clusters:
        mask[members] = False
    return np.flatnonzero(mask)


def fill(grid: Grid, cluster: list, start_cell: Cell, min_pts: int) -> None:
    """Grow ``cluster`` from ``start_cell`` through Moore-adjacent dense cells.

    Every reached cell is removed from ``grid`` so it is evaluated once.
    Dense cells (``len(cell) >= min_pts``) append their point-index array
    to ``cluster`` and propagate; sparse cells are dropped without
    propagating. Uses an explicit stack instead of recursion.
    """
    if grid.cells.get(start_cell.coords) is not start_cell:
        return
    remove = grid.remove
    remove(start_cell)
    # a cell leaves the grid as soon as it is reached, so it is pushed once
    stack = [start_cell]
    while stack:
        cell = stack.pop()
        if len(cell.points) < min_pts:
            continue
        cluster.append(cell.points)
        for nb in find_neighbors(grid, cell):
            remove(nb)
            stack.append(nb)


def _cluster_grid(grid: Grid, min_pts: int) -> list[np.ndarray]:
    found = []
    while (cell := grid.first_cell()) is not None:
        members: list[np.ndarray] = []
        fill(grid, members, cell, min_pts)
        if members:
            found.append(np.sort(np.concatenate(members)))
    return found


def lin_dbscan(points, params: LinDbscanParams) -> Clustering:
    """Cluster ``points`` (an ``(n, d)`` array, row = point index).

    Each returned cluster holds the points of one maximal set of
    Moore-connected cells whose cardinality is at least ``min_pts``.
    Points of sparser cells go to ``noise``. Clusters are numbered in
    discovery order, which equals the order of their smallest row index.
    """
    start = time.perf_counter()
    pts = as_points(points)
    grid = build_grid(pts, params.gamma)
    n_cells = grid.n_cells
    clusters = _cluster_grid(grid, params.min_pts)
    noise = _noise_from(clusters, len(pts))
    return Clustering(
        clusters=clusters,
        noise=noise,
        params=params,
        n_points=len(pts),
        n_cells=n_cells,
        elapsed=time.perf_counter() - start,
    )


def filter_min_size(clustering: Clustering, min_cluster_size: int) -> Clustering:
    """Move clusters smaller than ``min_cluster_size`` into noise.

    Surviving clusters keep their relative order and are renumbered
    ``0..k'-1``. A threshold of 2 removes the singleton clusters that a
    ``min_pts=1`` run produces for isolated points.
    """
    if min_cluster_size < 1:
        raise ValueError("min_cluster_size must be >= 1")
    kept = [c for c in clustering.clusters if len(c) >= min_cluster_size]
    dropped = [c for c in clustering.clusters if len(c) < min_cluster_size]
    noise = np.sort(np.concatenate([clustering.noise, *dropped])).astype(np.int64)
    return replace(clustering, clusters=kept, noise=noise, extra=dict(clustering.extra))


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def split_counts(n_partitions: int, dims: int) -> tuple[int, ...]:
    """Blocks per axis whose product is ``n_partitions``.

    Prime factors are dealt round-robin over the axes, largest first, so
    4 -> (2, 2) and 16 -> (4, 4) in 2-D.
    """
    factors = []
    m, p = n_partitions, 2
    while m > 1:
        while m % p == 0:
            factors.append(p)
            m //= p
        p += 1
    parts = [1] * max(dims, 1)
    for i, f in enumerate(sorted(factors, reverse=True)):
        parts[i % len(parts)] *= f
    return tuple(parts[:dims]) if dims else ()


class _Blocks:
    """Maps cell coordinates to an axis-aligned block of cell-index space."""

    def __init__(self, coords: np.ndarray, parts: tuple[int, ...]):
        self.parts = parts
        self.lo = coords.min(axis=0)
        self.span = coords.max(axis=0) - self.lo + 1
        self.axes = [k for k, p in enumerate(parts) if p > 1]

    def block_along(self, axis: int, index: int) -> int:
        p = self.parts[axis]
        b = (index - int(self.lo[axis])) * p // int(self.span[axis])
        return min(max(b, 0), p - 1)

    def block_of(self, coords) -> tuple[int, ...]:
        return tuple(self.block_along(k, coords[k]) for k in self.axes)

    def on_boundary(self, coords) -> bool:
        for k in self.axes:
            b = self.block_along(k, coords[k])
            if self.block_along(k, coords[k] - 1) != b or self.block_along(k, coords[k] + 1) != b:
                return True
        return False


def parallel_lin_dbscan(
    points,
    params: LinDbscanParams,
    n_partitions: int = 4,
    max_workers: int | None = None,
) -> Clustering:
    """Sub-grid parallel variant of :func:`lin_dbscan`.

    The occupied cell-index range is cut into ``n_partitions`` axis-aligned
    blocks, each clustered by its own worker. Local clusters owning dense
    cells that are Moore-adjacent across a block boundary are then merged
    with a union-find. The result equals the sequential partition for any
    ``n_partitions``; clusters are renumbered by smallest row index.
    """
    if int(n_partitions) != n_partitions or n_partitions < 1:
        raise ValueError(f"n_partitions must be an integer >= 1, got {n_partitions!r}")
    start = time.perf_counter()
    pts = as_points(points)
    full = build_grid(pts, params.gamma)
    n_cells = full.n_cells
    if n_partitions == 1 or n_cells == 0:
        clusters = _cluster_grid(full, params.min_pts)
        return Clustering(
            clusters=clusters,
            noise=_noise_from(clusters, len(pts)),
            params=params,
            n_points=len(pts),
            n_cells=n_cells,
            elapsed=time.perf_counter() - start,
            extra={"n_partitions": n_partitions},
        )

    coords = np.array(list(full.cells), dtype=np.int64).reshape(n_cells, full.dims)
    blocks = _Blocks(coords, split_counts(n_partitions, full.dims))
    sub_cells: dict[tuple, dict] = {}
    for key, cell in full.cells.items():
        sub_cells.setdefault(blocks.block_of(key), {})[key] = cell
    subgrids = [Grid(gamma=full.gamma, dims=full.dims, cells=c) for c in sub_cells.values()]
    for g in subgrids:
        g.n_points = sum(len(c) for c in g.cells.values())

    workers = max_workers or min(len(subgrids), os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        local = list(pool.map(lambda g: _cluster_grid(g, params.min_pts), subgrids))

    # global id per local cluster, and per point for the boundary lookup
    label = np.full(len(pts), -1, dtype=np.int64)
    flat: list[np.ndarray] = []
    for found in local:
        for members in found:
            label[members] = len(flat)
            flat.append(members)

    uf = UnionFind(len(flat))
    min_pts = params.min_pts
    for key, cell in full.cells.items():
        if len(cell) < min_pts or not blocks.on_boundary(key):
            continue
        here = blocks.block_of(key)
        mine = int(label[cell.points[0]])
        for other in find_neighbors(full, cell):
            if len(other) >= min_pts and blocks.block_of(other.coords) != here:
                uf.union(mine, int(label[other.points[0]]))

    groups: dict[int, list[np.ndarray]] = {}
    for i, members in enumerate(flat):
        groups.setdefault(uf.find(i), []).append(members)
    clusters = [np.sort(np.concatenate(g)) for g in groups.values()]
    clusters.sort(key=lambda c: int(c[0]))
    return Clustering(
        clusters=clusters,
        noise=_noise_from(clusters, len(pts)),
        params=params,
        n_points=len(pts),
        n_cells=n_cells,
        elapsed=time.perf_counter() - start,
        extra={"n_partitions": n_partitions, "n_blocks": len(subgrids)},
    )
