"""External validation indices from pair counts and the label contingency table."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .engine import Clustering

INDEX_NAMES = ("precision", "recall", "f_measure", "rand", "jaccard", "fowlkes_mallows", "nmi")
NMI_NORMALIZERS = ("mean", "sqrt", "min", "max")


class NoisePolicy(str, Enum):
    EXCLUDE = "exclude_noise"
    SINGLETONS = "noise_as_singletons"

    @classmethod
    def parse(cls, value) -> "NoisePolicy":
        if isinstance(value, cls):
            return value
        aliases = {"exclude": cls.EXCLUDE, "singletons": cls.SINGLETONS}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise ValueError(f"unknown noise policy {value!r}") from None


@dataclass
class ContingencyStats:
    """Pair counts over all unordered pairs of evaluated points.

    ``tp``: same predicted cluster and same class; ``fp``: same cluster,
    different class; ``fn``: different cluster, same class; ``tn``:
    different in both. ``joint_counts[i, j]`` counts points of predicted
    cluster ``i`` in class ``j``.
    """

    tp: int
    fp: int
    fn: int
    tn: int
    joint_counts: np.ndarray
    n_eval: int

    @property
    def n_pairs(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass
class IndexReport:
    precision: float
    recall: float
    f_measure: float
    rand: float
    jaccard: float
    fowlkes_mallows: float
    nmi: float
    degenerate: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[str, float]:
        d = asdict(self)
        d.pop("degenerate")
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def _comb2(x) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int(np.sum(x * (x - 1) // 2))


def _codes(labels) -> np.ndarray:
    return np.unique(np.asarray(labels), return_inverse=True)[1].reshape(-1)


def contingency_from_labels(pred, truth) -> ContingencyStats:
    """Pair counts for two label vectors of equal length (every label is a group)."""
    pred, truth = np.asarray(pred), np.asarray(truth)
    if len(pred) != len(truth):
        raise ValueError(f"label vectors differ in length: {len(pred)} vs {len(truth)}")
    n = len(pred)
    if n == 0:
        return ContingencyStats(0, 0, 0, 0, np.zeros((0, 0), np.int64), 0)
    pc, tc = _codes(pred), _codes(truth)
    joint = np.zeros((pc.max() + 1, tc.max() + 1), dtype=np.int64)
    np.add.at(joint, (pc, tc), 1)
    tp = _comb2(joint)
    same_pred = _comb2(joint.sum(axis=1))
    same_truth = _comb2(joint.sum(axis=0))
    fp = same_pred - tp
    fn = same_truth - tp
    tn = n * (n - 1) // 2 - tp - fp - fn
    return ContingencyStats(tp, fp, fn, tn, joint, n)


def contingency(pred: Clustering, truth, noise_policy=NoisePolicy.SINGLETONS) -> ContingencyStats:
    """Compare a clustering with ground-truth labels (one per row).

    With ``exclude_noise`` predicted-noise points are left out of the
    evaluation; with ``noise_as_singletons`` each one is its own cluster.
    """
    policy = NoisePolicy.parse(noise_policy)
    truth = np.asarray(truth)
    if len(truth) != pred.n_points:
        raise ValueError(f"{len(truth)} truth labels for {pred.n_points} points")
    if truth.dtype == object and any(t is None for t in truth.tolist()):
        raise ValueError("missing truth labels")
    labels = pred.labels()
    if policy is NoisePolicy.EXCLUDE:
        keep = labels >= 0
        return contingency_from_labels(labels[keep], truth[keep])
    noise = labels < 0
    labels = labels.copy()
    labels[noise] = labels.max(initial=-1) + 1 + np.arange(int(noise.sum()))
    return contingency_from_labels(labels, truth)


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi_from_joint(joint: np.ndarray, normalizer: str = "mean") -> tuple[float, bool]:
    """Normalised mutual information and a flag set when the normaliser is zero.

    Two single-group partitions count as identical (NMI 1).
    """
    n = int(joint.sum())
    if n == 0:
        return 0.0, True
    a, b = joint.sum(axis=1), joint.sum(axis=0)
    h_u, h_v = _entropy(a, n), _entropy(b, n)
    nz = joint > 0
    outer = np.outer(a, b)[nz]
    mi = float(np.sum(joint[nz] / n * np.log(joint[nz] * n / outer)))
    norm = {
        "mean": (h_u + h_v) / 2,
        "sqrt": math.sqrt(h_u * h_v),
        "min": min(h_u, h_v),
        "max": max(h_u, h_v),
    }.get(normalizer)
    if norm is None:
        raise ValueError(f"unknown NMI normalizer {normalizer!r}; choose from {NMI_NORMALIZERS}")
    if norm == 0:
        # both partitions trivial: identical iff both are a single group
        same = h_u == 0 and h_v == 0
        return (1.0 if same else 0.0), True
    return min(max(mi / norm, 0.0), 1.0), False


def indices(stats: ContingencyStats, nmi_normalizer: str = "mean") -> IndexReport:
    """All seven indices; a zero denominator yields 0 and a ``degenerate`` entry."""
    if stats.n_eval < 2:
        raise ValueError("need at least two evaluated points")
    degenerate = []

    def ratio(name, num, den):
        if den == 0:
            degenerate.append(name)
            return 0.0
        return num / den

    tp, fp, fn, tn = stats.tp, stats.fp, stats.fn, stats.tn
    precision = ratio("precision", tp, tp + fp)
    recall = ratio("recall", tp, tp + fn)
    f_measure = ratio("f_measure", 2 * precision * recall, precision + recall)
    rand = (tp + tn) / stats.n_pairs
    jaccard = ratio("jaccard", tp, tp + fp + fn)
    fm = math.sqrt(precision * recall)
    nmi, nmi_degenerate = nmi_from_joint(stats.joint_counts, nmi_normalizer)
    if nmi_degenerate:
        degenerate.append("nmi")
    return IndexReport(precision, recall, f_measure, rand, jaccard, fm, nmi, degenerate)


def evaluate(pred: Clustering, truth, noise_policy=NoisePolicy.SINGLETONS,
             nmi_normalizer: str = "mean") -> IndexReport:
    return indices(contingency(pred, truth, noise_policy), nmi_normalizer)
