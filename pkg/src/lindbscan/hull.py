"""2-D convex hulls for drawing cluster outlines."""

from __future__ import annotations

import numpy as np


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points) -> list[tuple[float, float]]:
    """Counter-clockwise hull vertices by Andrew's monotone chain.

    Collinear boundary points are dropped. One distinct point gives a
    single vertex and two give the segment endpoints.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"convex_hull_2d needs (n, 2) points, got shape {pts.shape}")
    if len(pts) == 0:
        raise ValueError("convex_hull_2d needs at least one point")
    uniq = sorted(set(map(tuple, pts.tolist())))
    if len(uniq) <= 2:
        return uniq

    lower: list[tuple[float, float]] = []
    for p in uniq:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(uniq):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    # collinear input collapses to the two extreme points here
    return lower[:-1] + upper[:-1]


def cluster_hulls(points, clustering) -> list[dict]:
    """``[{"cluster_id": i, "vertices": [[x, y], ...]}, ...]`` for every cluster."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("hulls are only defined for 2-D data")
    return [
        {"cluster_id": cid, "vertices": [list(v) for v in convex_hull_2d(pts[members])]}
        for cid, members in enumerate(clustering.clusters)
    ]
