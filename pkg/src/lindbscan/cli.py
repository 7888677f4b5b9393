"""Command-line front end: ``lindbscan {cluster,estimate,evaluate,bench,gen}``."""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import datasets
from .bench import bench, run_algorithm
from .engine import Clustering, filter_min_size
from .heuristic import suggest_params
from .hull import cluster_hulls
from .validation import NoisePolicy, evaluate

DELIM_CHOICES = {"auto": "auto", "comma": "comma", "ws": "whitespace", "whitespace": "whitespace"}


def _add_input(p, required=True):
    p.add_argument("--input", required=required, help="delimited text file, one point per row")
    p.add_argument("--delimiter", default="auto", choices=sorted(DELIM_CHOICES))
    p.add_argument("--label-col", type=int, default=None,
                   help="0-based column holding a ground-truth label (negative counts from the end)")


def _load(args) -> datasets.Dataset:
    spec = datasets.DatasetSpec(args.input, DELIM_CHOICES[args.delimiter], args.label_col)
    return datasets.load_dataset(spec)


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindbscan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a dataset and write per-row assignments")
    _add_input(p)
    p.add_argument("--output", help="assignment file (row_index,cluster_id; noise = -1)")
    p.add_argument("--algo", choices=("lin", "dbscan"), default="lin")
    p.add_argument("--gamma", type=_positive(float), help="cell size for lin")
    p.add_argument("--eps", type=_positive(float), help="neighbourhood radius for dbscan")
    p.add_argument("--minpts", type=_positive(int), default=1)
    p.add_argument("--backend", choices=("kdtree", "grid", "brute"), default="kdtree")
    p.add_argument("--drop-singletons", action="store_true",
                   help="move clusters of a single point to noise")
    p.add_argument("--hulls", help="write convex hulls of the clusters as JSON (2-D only)")
    p.add_argument("--parallel", type=_positive(int), default=None, metavar="N",
                   help="use the sub-grid parallel variant with N partitions")

    p = sub.add_parser("estimate", help="k-dist analysis and gamma suggestion")
    _add_input(p)
    p.add_argument("--k", type=_positive(int), default=4)
    p.add_argument("--series", help="write the sorted k-dist series (rank,distance)")
    p.add_argument("--output", help="write the suggestion JSON here as well")

    p = sub.add_parser("evaluate", help="external validation indices against ground truth")
    p.add_argument("--pred", required=True, help="assignment file from `cluster`")
    p.add_argument("--truth", required=True,
                   help="ground truth: a dataset file with --label-col, or a row_index,label file")
    p.add_argument("--label-col", type=int, default=None)
    p.add_argument("--delimiter", default="auto", choices=sorted(DELIM_CHOICES))
    p.add_argument("--noise-policy", choices=("singletons", "exclude"), default="singletons")
    p.add_argument("--nmi", choices=("mean", "sqrt", "min", "max"), default="mean",
                   help="NMI normaliser")
    p.add_argument("--output", help="write the report JSON here as well")

    p = sub.add_parser("bench", help="time a clustering run (median of repeats)")
    _add_input(p, required=False)
    p.add_argument("--algo", choices=("lin", "dbscan"), default="lin")
    p.add_argument("--gamma", type=_positive(float))
    p.add_argument("--eps", type=_positive(float))
    p.add_argument("--minpts", type=_positive(int), default=1)
    p.add_argument("--backend", choices=("kdtree", "grid", "brute"), default="kdtree")
    p.add_argument("--parallel", type=_positive(int), default=None, metavar="N")
    p.add_argument("--repeats", type=_positive(int), default=3)
    p.add_argument("--n", type=int, default=None, help="generate N uniform points instead of --input")
    p.add_argument("--dims", type=_positive(int), default=2)
    p.add_argument("--side", type=_positive(float), default=None,
                   help="side of the generated hypercube (default N**(1/dims))")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the report JSON here as well")

    p = sub.add_parser("gen", help="write a seeded uniform synthetic dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dims", type=_positive(int), default=2)
    p.add_argument("--side", type=_positive(float), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    return parser


def _emit(obj, path=None):
    text = json.dumps(obj, indent=2)
    print(text)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _cmd_cluster(args) -> int:
    ds = _load(args)
    t0 = time.perf_counter()
    result = run_algorithm(ds.points, args.algo, gamma=args.gamma, eps=args.eps,
                           min_pts=args.minpts, backend=args.backend, parallel=args.parallel)
    if args.drop_singletons:
        result = filter_min_size(result, 2)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    if args.output:
        datasets.write_assignments(args.output, result.labels())
    if args.hulls:
        with open(args.hulls, "w") as fh:
            json.dump(cluster_hulls(ds.points, result), fh)
    print(f"n_points={result.n_points} n_clusters={result.n_clusters} "
          f"n_noise={result.n_noise} elapsed_ms={elapsed_ms:.3f}")
    return 0


def _cmd_estimate(args) -> int:
    ds = _load(args)
    res = suggest_params(ds.points, args.k)
    if args.series:
        res.series.to_text(args.series)
    _emit(res.as_dict(), args.output)
    return 0


def _cmd_evaluate(args) -> int:
    pred = datasets.read_assignments(args.pred)
    if args.label_col is not None:
        spec = datasets.DatasetSpec(args.truth, DELIM_CHOICES[args.delimiter], args.label_col)
        truth = datasets.load_dataset(spec).labels
    else:
        truth = datasets.read_assignments(args.truth)
    if len(pred) != len(truth):
        raise ValueError(f"{len(pred)} predicted rows but {len(truth)} truth rows")
    clustering = Clustering.from_labels(np.asarray(pred, dtype=np.int64))
    report = evaluate(clustering, truth, NoisePolicy.parse(args.noise_policy), args.nmi)
    _emit(report.as_dict(), args.output)
    return 0


def _cmd_bench(args) -> int:
    if args.n is not None:
        if args.n <= 0:
            raise ValueError(f"generator size must be positive, got {args.n}")
        points = datasets.uniform_points(args.n, args.dims, args.side, args.seed)
        name = f"uniform-n{args.n}-d{args.dims}-seed{args.seed}"
    elif args.input:
        ds = _load(args)
        points, name = ds.points, ds.name
    else:
        raise ValueError("bench needs --input or --n")
    report = bench(points, args.algo, dataset=name, repeats=args.repeats, gamma=args.gamma,
                   eps=args.eps, min_pts=args.minpts, backend=args.backend,
                   parallel=args.parallel)
    _emit(report.as_dict(), args.output)
    return 0


def _cmd_gen(args) -> int:
    points = datasets.uniform_points(args.n, args.dims, args.side, args.seed)
    datasets.save_points(args.output, points)
    print(f"wrote {len(points)} points to {args.output}")
    return 0


COMMANDS = {
    "cluster": _cmd_cluster,
    "estimate": _cmd_estimate,
    "evaluate": _cmd_evaluate,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"lindbscan {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
