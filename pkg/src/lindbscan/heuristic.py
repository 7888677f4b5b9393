"""Sorted k-dist analysis and the eps -> gamma translation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .grid import as_points

SQRT8 = 2 * math.sqrt(2)


def gamma_from_eps(eps: float) -> float:
    """Cell size whose diagonal-based bound keeps a 2-D cell inside an ``eps`` ball."""
    if not math.isfinite(eps) or eps <= 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    return eps / SQRT8


@dataclass(frozen=True)
class KDistSeries:
    k: int
    values: np.ndarray  # descending

    def __len__(self) -> int:
        return len(self.values)

    def to_text(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("rank,distance\n")
            for rank, v in enumerate(self.values.tolist()):
                fh.write(f"{rank},{v!r}\n")


@dataclass(frozen=True)
class HeuristicResult:
    eps_estimate: float
    gamma_suggested: float
    min_pts_suggested: int
    knee_index: int | None
    eps_used: float
    degenerate_knee: bool
    low_confidence: bool
    series: KDistSeries

    def as_dict(self) -> dict:
        return {
            "eps_estimate": self.eps_estimate,
            "gamma_suggested": self.gamma_suggested,
            "min_pts_suggested": self.min_pts_suggested,
            "knee_index": self.knee_index,
            "eps_used": self.eps_used,
            "degenerate_knee": self.degenerate_knee,
            "low_confidence": self.low_confidence,
            "k": self.series.k,
            "n_points": len(self.series),
        }


def k_dist(points, k: int) -> KDistSeries:
    """Distance from every point to its k-th nearest other point, sorted descending."""
    pts = as_points(points)
    n = len(pts)
    if k < 1 or k >= n:
        raise ValueError(f"k must satisfy 1 <= k < n (n={n}), got {k}")
    dist, _ = cKDTree(pts).query(pts, k=k + 1)
    # column 0 is the point itself (or a duplicate at distance 0)
    values = np.sort(dist[:, k])[::-1].copy()
    return KDistSeries(k=k, values=values)


def find_knee(values, window: int = 5) -> int | None:
    """Index of maximum discrete curvature of a descending series.

    The series is smoothed with a ``window``-point moving average before
    taking second differences. Returns ``None`` when the series is flat
    or has no convex bend.
    """
    v = np.asarray(values, dtype=np.float64)
    if len(v) < 3 or np.ptp(v) == 0:
        return None
    w = min(window, len(v) - 2)
    smooth = np.convolve(v, np.ones(w) / w, mode="valid") if w > 1 else v
    if len(smooth) < 3:
        return None
    second = smooth[:-2] - 2 * smooth[1:-1] + smooth[2:]
    best = int(np.argmax(second))
    if second[best] <= 0:
        return None
    return best + 1 + (w - 1) // 2


def suggest_params(points, k: int = 4, window: int = 5) -> HeuristicResult:
    """Suggest ``(gamma, min_pts)`` from the knee of the sorted k-dist series.

    The eps estimate is the k-dist value at the knee. The gamma is derived
    from a relaxed eps taken ``window`` ranks above the knee (a larger
    k-dist value), so ``gamma >= eps_estimate / (2*sqrt(2))`` always
    holds. This is a starting point, not an optimum: the full series is
    returned so the knee can be picked by eye instead.
    """
    pts = as_points(points)
    series = k_dist(pts, k)
    vals = series.values
    knee = find_knee(vals, window)
    if knee is None:
        eps_estimate = float(vals[len(vals) // 2])
        eps_used = eps_estimate
    else:
        eps_estimate = float(vals[knee])
        eps_used = float(vals[max(knee - window, 0)])
    if eps_estimate <= 0:
        positive = vals[vals > 0]
        if len(positive) == 0:
            raise ValueError("all k-dist values are zero; points are duplicates")
        eps_estimate = float(positive[-1])
        eps_used = max(eps_used, eps_estimate)
    return HeuristicResult(
        eps_estimate=eps_estimate,
        gamma_suggested=gamma_from_eps(eps_used),
        min_pts_suggested=1,
        knee_index=knee,
        eps_used=eps_used,
        degenerate_knee=knee is None,
        low_confidence=pts.shape[1] != 2,
        series=series,
    )
