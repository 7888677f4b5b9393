"""Wall-clock timing of clustering runs."""

from __future__ import annotations

import gc
import statistics
import time
from dataclasses import asdict, dataclass

from .baseline import DbscanParams, dbscan
from .engine import Clustering, LinDbscanParams, lin_dbscan, parallel_lin_dbscan


@dataclass
class BenchReport:
    dataset: str
    algorithm: str
    backend: str
    params: dict
    n_points: int
    dims: int
    elapsed: float  # median milliseconds
    repeats: int
    n_clusters: int
    n_noise: int

    def as_dict(self) -> dict:
        return asdict(self)


def run_algorithm(points, algo: str, *, gamma=None, eps=None, min_pts=1,
                  backend="kdtree", parallel: int | None = None) -> Clustering:
    if algo == "lin":
        if gamma is None:
            raise ValueError("lin needs gamma")
        params = LinDbscanParams(gamma, min_pts)
        if parallel:
            return parallel_lin_dbscan(points, params, parallel)
        return lin_dbscan(points, params)
    if algo == "dbscan":
        if eps is None:
            raise ValueError("dbscan needs eps")
        return dbscan(points, DbscanParams(eps, min_pts), backend=backend)
    raise ValueError(f"unknown algorithm {algo!r}")


def median_time(fn, repeats: int = 3, warmup: bool = True) -> tuple[float, object]:
    """Median seconds of ``repeats`` calls (after one untimed warm-up) and the last result.

    The garbage collector is paused while timing, as :mod:`timeit` does.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if warmup:
        fn()
    times = []
    result = None
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repeats):
            t0 = time.perf_counter()
            result = fn()
            times.append(time.perf_counter() - t0)
    finally:
        if was_enabled:
            gc.enable()
    return statistics.median(times), result


def median_times_interleaved(fns, repeats: int = 3) -> list[float]:
    """Median seconds per function, timing them round-robin after one warm-up each.

    Interleaving spreads slow drifts of the machine over all functions
    instead of penalising whichever ran during the drift.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    for fn in fns:
        fn()
    times = [[] for _ in fns]
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repeats):
            for fn, acc in zip(fns, times):
                t0 = time.perf_counter()
                fn()
                acc.append(time.perf_counter() - t0)
    finally:
        if was_enabled:
            gc.enable()
    return [statistics.median(t) for t in times]


def bench(points, algo: str, *, dataset: str = "", repeats: int = 3, gamma=None, eps=None,
          min_pts=1, backend="kdtree", parallel=None, warmup: bool = True) -> BenchReport:
    """Time one algorithm; index construction is inside the timed call."""
    def once():
        return run_algorithm(points, algo, gamma=gamma, eps=eps, min_pts=min_pts,
                             backend=backend, parallel=parallel)

    seconds, result = median_time(once, repeats, warmup)
    if algo == "lin":
        params = {"gamma": gamma, "min_pts": min_pts}
        used = f"grid-parallel-{parallel}" if parallel else "grid"
    else:
        params = {"eps": eps, "min_pts": min_pts}
        used = backend
    return BenchReport(
        dataset=dataset,
        algorithm=algo,
        backend=used,
        params=params,
        n_points=len(points),
        dims=int(points.shape[1]) if len(points) else 0,
        elapsed=max(seconds * 1000.0, 1e-6),
        repeats=repeats,
        n_clusters=result.n_clusters,
        n_noise=result.n_noise,
    )
