"""External indices of DBSCAN and Lin-DBSCAN on the labelled 2-D benchmarks.

Runs every benchmark file found in the data directory (``data/`` or
``$LINDBSCAN_DATA_DIR``) with the heuristic parameters and with the tuned
Lin-DBSCAN parameters, under both noise policies. Missing files are listed
and skipped. Chameleon sets have no labels; with ``--hulls DIR`` their
clusters are written as convex-hull JSON instead.

    python scripts/quality_tables.py --nmi mean
"""

import argparse
import json
from pathlib import Path

from lindbscan import datasets
from lindbscan.baseline import DbscanParams, dbscan
from lindbscan.engine import LinDbscanParams, filter_min_size, lin_dbscan
from lindbscan.hull import cluster_hulls
from lindbscan.validation import INDEX_NAMES, NoisePolicy, evaluate

# name: (dbscan eps, dbscan min_pts, heuristic gamma, heuristic min_pts, tuned gamma, tuned min_pts)
PARAMS = {
    "aggregation": (1.0, 4, 1.2, 2, 0.595, 1),
    "mouse": (0.035, 4, 0.02035, 1, 0.021, 1),
    "multiple-gaussian-2d": (0.1, 4, 0.035, 1, 0.171, 2),
    "pathbased": (1.5, 4, 0.8, 1, 0.826, 1),
    "vary-density": (0.0675, 4, 0.03, 1, 0.03615, 1),
    "spiral": (1.2, 1, 1.0, 1, 1.0, 1),
}
CHAMELEON = {"t4.8k": 3.34, "t5.8k": 1.873, "t7.10k": 4.31, "t8.8k": 4.94}


def _row(label, report):
    values = " ".join(f"{report.as_dict()[k]:.4f}" for k in INDEX_NAMES)
    return f"  {label:<28} {values}"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nmi", default="mean", choices=("mean", "sqrt", "min", "max"))
    parser.add_argument("--hulls", type=Path, help="directory for Chameleon hull JSON files")
    args = parser.parse_args(argv)

    print(f"data directory: {datasets.data_dir()}")
    header = " " * 31 + " ".join(f"{k[:6]:>6}" for k in INDEX_NAMES)
    missing = []
    for key, (eps, m_db, g_h, m_h, g_t, m_t) in PARAMS.items():
        if datasets.find_benchmark(key) is None:
            missing.append(key)
            continue
        ds = datasets.load_benchmark(key)
        runs = {
            f"dbscan eps={eps} m={m_db}": dbscan(ds.points, DbscanParams(eps, m_db)),
            f"lin heuristic g={g_h} m={m_h}": lin_dbscan(ds.points, LinDbscanParams(g_h, m_h)),
            f"lin tuned g={g_t} m={m_t}": lin_dbscan(ds.points, LinDbscanParams(g_t, m_t)),
        }
        print(f"\n{ds.name} ({ds.n_points} points)\n{header}")
        for policy in NoisePolicy:
            print(f" noise policy: {policy.value}")
            for label, res in runs.items():
                print(_row(label, evaluate(res, ds.labels, policy, args.nmi)))

    for key, gamma in CHAMELEON.items():
        if datasets.find_benchmark(key) is None:
            missing.append(key)
            continue
        ds = datasets.load_benchmark(key)
        res = filter_min_size(lin_dbscan(ds.points, LinDbscanParams(gamma, 1)), 2)
        print(f"\n{ds.name}: gamma={gamma} clusters={res.n_clusters} noise={res.n_noise}")
        if args.hulls:
            args.hulls.mkdir(parents=True, exist_ok=True)
            out = args.hulls / f"{key}.hulls.json"
            out.write_text(json.dumps(cluster_hulls(ds.points, res)))
            print(f"  hulls -> {out}")

    if missing:
        print("\nnot found (see README for sources): " + ", ".join(missing))


if __name__ == "__main__":
    main()
