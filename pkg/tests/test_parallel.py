import numpy as np
import pytest
from conftest import point_sets
from hypothesis import given
from hypothesis import strategies as st

from lindbscan.engine import (
    LinDbscanParams,
    UnionFind,
    lin_dbscan,
    parallel_lin_dbscan,
    split_counts,
)


def _same(a, b):
    return a.partition() == b.partition() and a.noise.tolist() == b.noise.tolist()


@pytest.mark.parametrize("parts", [1, 2, 3, 4, 6, 16])
def test_two_blobs(two_blobs, parts):
    res = parallel_lin_dbscan(two_blobs, LinDbscanParams(1.0, 1), parts)
    assert sorted(res.sizes()) == [2, 3]
    assert res.labels().tolist() == [0, 0, 0, 1, 1]


def test_one_partition_is_sequential():
    pts = np.random.default_rng(0).uniform(0, 20, size=(300, 2))
    p = LinDbscanParams(0.8, 2)
    seq, par = lin_dbscan(pts, p), parallel_lin_dbscan(pts, p, 1)
    assert [c.tolist() for c in seq.clusters] == [c.tolist() for c in par.clusters]


@pytest.mark.parametrize("parts", [2, 4, 16])
def test_chain_straddling_boundaries_merges(parts):
    # a diagonal chain of dense cells crossing every block boundary
    xs = np.repeat(np.arange(40) + 0.5, 2)
    pts = np.column_stack([xs, xs])
    res = parallel_lin_dbscan(pts, LinDbscanParams(1.0, 2), parts)
    assert res.extra["n_blocks"] > 1
    assert res.sizes() == [80]


def test_merge_through_diagonal_corner():
    # cells (k, k) and (k+1, k+1) touch only at a corner shared by four blocks
    pts = np.array([[9.5, 9.5], [10.5, 10.5], [0.5, 0.5], [19.5, 19.5]])
    res = parallel_lin_dbscan(pts, LinDbscanParams(1.0, 1), 4)
    assert _same(res, lin_dbscan(pts, LinDbscanParams(1.0, 1)))


@given(point_sets(max_n=150, dims=st.integers(1, 3)), st.floats(0.1, 8), st.integers(1, 4),
       st.sampled_from([1, 2, 4, 16]))
def test_equals_sequential(pts, gamma, min_pts, parts):
    p = LinDbscanParams(gamma, min_pts)
    seq, par = lin_dbscan(pts, p), parallel_lin_dbscan(pts, p, parts)
    assert _same(seq, par)
    # ids follow the smallest row index in both
    assert seq.labels().tolist() == par.labels().tolist()


@pytest.mark.parametrize("bad", [0, -2, 1.5])
def test_bad_partition_count(two_blobs, bad):
    with pytest.raises(ValueError):
        parallel_lin_dbscan(two_blobs, LinDbscanParams(1.0), bad)


def test_empty_input():
    res = parallel_lin_dbscan(np.empty((0, 2)), LinDbscanParams(1.0), 4)
    assert res.n_clusters == 0 and res.n_noise == 0


@pytest.mark.parametrize(
    "n, dims, expected",
    [(1, 2, (1, 1)), (4, 2, (2, 2)), (16, 2, (4, 4)), (2, 2, (2, 1)), (8, 3, (2, 2, 2)),
     (12, 2, (6, 2)), (4, 1, (4,))],
)
def test_split_counts(n, dims, expected):
    assert split_counts(n, dims) == expected


def test_union_find():
    uf = UnionFind(6)
    assert uf.union(0, 1) and uf.union(2, 3) and uf.union(1, 3)
    assert not uf.union(0, 2)
    assert len({uf.find(i) for i in range(6)}) == 3
    assert uf.find(0) == uf.find(3) != uf.find(4)
