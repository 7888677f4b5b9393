"""Acceptance criteria, one test each.

A summary line per criterion (PASS/FAIL/SKIP plus measured values) is
printed at the end of the run by the hook in conftest.py. Criteria that
need the public benchmark files skip when the files are absent; set
LINDBSCAN_REQUIRE_DATA=1 to turn those skips into failures.
"""

import math
import os
import time

import numpy as np
import pytest
from oracles import (
    dbscan_oracle,
    indices_oracle,
    kdist_oracle,
    lin_oracle,
    nmi_oracle,
    random_dataset,
)

from lindbscan import datasets
from lindbscan.baseline import DbscanParams, dbscan
from lindbscan.bench import median_time, median_times_interleaved
from lindbscan.engine import LinDbscanParams, filter_min_size, lin_dbscan, parallel_lin_dbscan
from lindbscan.heuristic import gamma_from_eps, k_dist, suggest_params
from lindbscan.validation import (
    INDEX_NAMES,
    NMI_NORMALIZERS,
    NoisePolicy,
    contingency,
    contingency_from_labels,
    evaluate,
    indices,
)

PAIR_INDICES = INDEX_NAMES[:-1]


def _benchmark(key):
    try:
        return datasets.load_benchmark(key)
    except FileNotFoundError as exc:
        if os.environ.get("LINDBSCAN_REQUIRE_DATA") == "1":
            pytest.fail(str(exc))
        pytest.skip(f"benchmark file missing: {exc}")


def test_criterion_01_spiral_exact(record_property):
    ds = _benchmark("spiral")
    assert ds.n_points == 312
    start = time.perf_counter()
    res = lin_dbscan(ds.points, LinDbscanParams(1.0, 1))
    report = evaluate(res, ds.labels)
    elapsed = time.perf_counter() - start
    record_property("detail", f"indices={report.as_dict()} elapsed={elapsed:.3f}s")
    assert all(report.as_dict()[k] == 1.0 for k in INDEX_NAMES)
    assert elapsed < 1.0


# Lin-DBSCAN column of the optimal-parameter comparison table
OPTIMAL = {
    "aggregation": (0.595, 1, [0.8445, 0.9568, 0.8971, 0.9525, 0.8134, 0.8989, 0.8998]),
    "mouse": (0.021, 1, [0.9434, 0.8413, 0.8894, 0.9131, 0.8009, 0.8909, 0.7879]),
    "multiple-gaussian-2d": (0.171, 2, [0.9448, 0.9763, 0.9603, 0.9745, 0.9236, 0.9604, 0.9641]),
    "pathbased": (0.826, 1, [0.9899, 0.5920, 0.7409, 0.8600, 0.5885, 0.7655, 0.6967]),
    "vary-density": (0.03615, 1, [1.0000, 0.7069, 0.8283, 0.9036, 0.7069, 0.8408, 0.7725]),
}


def _matches_table(points, labels, gamma, min_pts, expected):
    """Best (policy, normaliser) and whether it reproduces the table row."""
    res = lin_dbscan(points, LinDbscanParams(gamma, min_pts))
    target = dict(zip(INDEX_NAMES, expected))
    best = None
    for policy in NoisePolicy:
        stats = contingency(res, labels, policy)
        pair = indices(stats).as_dict()
        pair_err = max(abs(pair[k] - target[k]) for k in PAIR_INDICES)
        for norm in NMI_NORMALIZERS:
            nmi_err = abs(indices(stats, norm).nmi - target["nmi"])
            ok = pair_err <= 0.03 and nmi_err <= 0.05
            cand = (ok, -pair_err - nmi_err, policy.value, norm, pair_err, nmi_err)
            if best is None or cand[:2] > best[:2]:
                best = cand
    return best


def test_criterion_02_optimal_parameter_indices(record_property):
    loaded = {key: _benchmark(key) for key in OPTIMAL}
    start = time.perf_counter()
    details, failed = [], []
    for key, (gamma, min_pts, expected) in OPTIMAL.items():
        ds = loaded[key]
        ok, _, policy, norm, pair_err, nmi_err = _matches_table(
            ds.points, ds.labels, gamma, min_pts, expected
        )
        details.append(f"{key}:{policy}/{norm} pair_err={pair_err:.4f} nmi_err={nmi_err:.4f}")
        if not ok:
            failed.append(key)
    elapsed = time.perf_counter() - start
    record_property("detail", "; ".join(details) + f" elapsed={elapsed:.2f}s")
    assert not failed, f"outside tolerance: {failed}"
    assert elapsed < 10.0


def test_criterion_03_oracle_equivalence(record_property):
    rng = np.random.default_rng(2024)
    for trial in range(500):
        pts = random_dataset(rng, n_max=200)
        span = float(np.ptp(pts)) or 1.0
        gamma = span * 10 ** rng.uniform(-2, 0)
        min_pts = int(rng.integers(1, 7))
        res = lin_dbscan(pts, LinDbscanParams(gamma, min_pts))
        got = (res.partition(), frozenset(res.noise.tolist()))
        assert got == lin_oracle(pts, gamma, min_pts), f"trial {trial}"
    record_property("detail", "500/500 trials equal the connected-dense-cells oracle")


def test_criterion_04_dbscan_oracle(record_property):
    rng = np.random.default_rng(77)
    for trial in range(200):
        pts = random_dataset(rng, n_max=200)
        span = float(np.ptp(pts)) or 1.0
        eps = span * 10 ** rng.uniform(-2, -0.5)
        min_pts = int(rng.integers(1, 9))
        labels, core = dbscan_oracle(pts, eps, min_pts)
        noise = [i for i, lab in enumerate(labels) if lab < 0]
        for backend in ("kdtree", "grid"):
            res = dbscan(pts, DbscanParams(eps, min_pts), backend=backend)
            assert set(res.extra["core"].tolist()) == core, f"trial {trial} {backend}"
            assert res.noise.tolist() == noise, f"trial {trial} {backend}"
            assert res.labels().tolist() == labels, f"trial {trial} {backend}"
    record_property("detail", "200/200 trials, kdtree and grid backends equal O(n^2) DBSCAN")


def test_criterion_05_order_invariance(record_property):
    rng = np.random.default_rng(5)
    for trial in range(100):
        pts = random_dataset(rng, n_max=300)
        span = float(np.ptp(pts)) or 1.0
        params = LinDbscanParams(span * 10 ** rng.uniform(-2, 0), int(rng.integers(1, 5)))
        perm = rng.permutation(len(pts))
        a = lin_dbscan(pts, params)
        b = lin_dbscan(pts[perm], params)
        back = frozenset(frozenset(perm[c].tolist()) for c in b.clusters)
        assert back == a.partition(), f"trial {trial}"
        assert sorted(perm[b.noise].tolist()) == a.noise.tolist(), f"trial {trial}"
    record_property("detail", "100/100 shuffled datasets give the same partition and noise")


def _straddling_dataset(rng):
    """Random points plus a dense diagonal chain crossing the middle of the range."""
    pts = random_dataset(rng, n_max=150, dims=2)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    t = np.linspace(0, 1, 60)[:, None]
    chain = lo + t * (hi - lo) + rng.normal(0, 0.01, (60, 2))
    return np.concatenate([pts, chain])


def test_criterion_06_parallel_equivalence(record_property):
    rng = np.random.default_rng(6)
    multi_block = 0
    for trial in range(50):
        pts = _straddling_dataset(rng) if trial % 2 == 0 else random_dataset(rng, n_max=200)
        span = float(np.ptp(pts)) or 1.0
        params = LinDbscanParams(span * 10 ** rng.uniform(-1.7, -0.7), int(rng.integers(1, 4)))
        seq = lin_dbscan(pts, params)
        for parts in (1, 2, 4, 16):
            par = parallel_lin_dbscan(pts, params, parts)
            assert par.partition() == seq.partition(), f"trial {trial} parts {parts}"
            assert par.noise.tolist() == seq.noise.tolist(), f"trial {trial} parts {parts}"
            multi_block += par.extra.get("n_blocks", 1) > 1
    record_property("detail", f"50 datasets x {{1,2,4,16}} partitions equal; "
                              f"{multi_block} runs used more than one block")
    assert multi_block > 0


@pytest.mark.slow
def test_criterion_07_linear_scaling_and_speedup(record_property):
    start = time.perf_counter()
    gamma = 2.0  # unit density: about 4 points per cell at every n
    times = {}
    for n in (50_000, 100_000, 200_000, 400_000):
        pts = datasets.uniform_points(n, 2, seed=n)
        times[n], _ = median_time(lambda: lin_dbscan(pts, LinDbscanParams(gamma, 1)), repeats=5)
    ratios = [times[2 * n] / times[n] for n in (50_000, 100_000, 200_000)]

    pts = datasets.uniform_points(200_000, 2, seed=200_000)
    eps = 2 * math.sqrt(2) * gamma
    t_db, _ = median_time(lambda: dbscan(pts, DbscanParams(eps, 4), backend="kdtree"), repeats=1)
    speedup = t_db / times[200_000]
    total = time.perf_counter() - start
    record_property("detail", "lin ms " + ", ".join(f"{n // 1000}k={t * 1e3:.0f}"
                                                    for n, t in times.items())
                    + " ratios=" + ",".join(f"{r:.2f}" for r in ratios)
                    + f" dbscan200k={t_db * 1e3:.0f}ms speedup={speedup:.1f}x total={total:.0f}s")
    assert all(r <= 2.5 for r in ratios)
    assert speedup >= 10
    assert total < 300


@pytest.mark.slow
def test_criterion_08_dimensionality_trend(record_property):
    # every d fills a box of exactly 576 unit cells, about 260 points per cell
    dims = range(2, 7)
    data = [datasets.uniform_box(150_000, datasets.box_shape(576, d), 1.0, seed=d) for d in dims]
    assert all(lin_dbscan(pts, LinDbscanParams(1.0, 1)).n_cells == 576 for pts in data)
    runs = [lambda pts=pts: lin_dbscan(pts, LinDbscanParams(1.0, 1)) for pts in data]
    times = median_times_interleaved(runs, repeats=15)
    ratio = times[-1] / times[0]
    record_property("detail", "ms " + ", ".join(f"d{d}={t * 1e3:.1f}" for d, t in zip(dims, times))
                    + f" t6/t2={ratio:.2f}")
    assert all(b >= a for a, b in zip(times, times[1:]))
    assert ratio <= 6


def test_criterion_09_gamma_formula(record_property):
    a, b = gamma_from_eps(2 * math.sqrt(2)), gamma_from_eps(11.28)
    record_property("detail", f"gamma(2*sqrt2)={a!r} gamma(11.28)={b:.6f}")
    assert abs(a - 1.0) <= 1e-12
    assert 3.98 <= b <= 4.00


def test_criterion_10_validation_oracle(record_property):
    rng = np.random.default_rng(10)
    for trial in range(200):
        n = int(rng.integers(2, 51))
        pred = rng.integers(0, int(rng.integers(1, 8)), n).tolist()
        truth = rng.integers(0, int(rng.integers(1, 8)), n).tolist()
        stats = contingency_from_labels(pred, truth)
        for norm in NMI_NORMALIZERS:
            report = indices(stats, norm).as_dict()
            for name, value in indices_oracle(pred, truth).items():
                assert abs(report[name] - value) <= 1e-12, f"trial {trial} {name}"
            expected = nmi_oracle(pred, truth, norm)
            if expected is not None:
                assert abs(report["nmi"] - expected) <= 1e-12, f"trial {trial} nmi/{norm}"
    hand = indices(contingency_from_labels([0, 0, 0], ["a", "a", "b"]))
    assert abs(hand.precision - 1 / 3) <= 1e-12 and hand.recall == 1.0
    assert abs(hand.rand - 1 / 3) <= 1e-12 and abs(hand.jaccard - 1 / 3) <= 1e-12
    assert abs(hand.fowlkes_mallows - math.sqrt(1 / 3)) <= 1e-12
    record_property("detail", "200/200 random partitions equal pair enumeration; hand case exact")


def test_criterion_11_heuristic_constraint(record_property):
    rng = np.random.default_rng(11)
    checked = 0
    for trial in range(100):
        pts = random_dataset(rng, n_max=300, dims=2)
        k = int(rng.integers(1, 6))
        if k >= len(pts):
            continue
        expected = kdist_oracle(pts, k)
        assert np.allclose(k_dist(pts, k).values, expected, rtol=0, atol=1e-9), f"trial {trial}"
        if max(expected) == 0:
            continue
        res = suggest_params(pts, k)
        assert res.gamma_suggested >= res.eps_estimate / (2 * math.sqrt(2)), f"trial {trial}"
        checked += 1
    record_property("detail", f"{checked} suggestions satisfy the bound; k_dist equals brute force")


def test_criterion_12_filter_semantics(record_property):
    rng = np.random.default_rng(12)
    for trial in range(100):
        pts = random_dataset(rng, n_max=200)
        span = float(np.ptp(pts)) or 1.0
        res = lin_dbscan(pts, LinDbscanParams(span * 10 ** rng.uniform(-2, -0.5), 1))
        singles = sorted(int(c[0]) for c in res.clusters if len(c) == 1)
        out = filter_min_size(res, 2)
        assert all(len(c) >= 2 for c in out.clusters), f"trial {trial}"
        assert out.noise.tolist() == sorted(res.noise.tolist() + singles), f"trial {trial}"
        assert out.partition() == frozenset(c for c in res.partition() if len(c) > 1)
    record_property("detail", "100/100 runs: no singleton clusters left, exactly those moved to noise")
