"""Lin-DBSCAN and DBSCAN wall-clock time against n on uniform 2-D data.

Data has unit density, so a fixed gamma keeps the mean cell occupancy
constant (gamma**2 points per cell). DBSCAN uses eps = 2*sqrt(2)*gamma.

    python scripts/scaling.py --sizes 50000 100000 200000 400000
"""

import argparse
import json
import math

from lindbscan.bench import bench
from lindbscan.datasets import uniform_points


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50_000, 100_000, 200_000, 400_000])
    parser.add_argument("--gamma", type=float, default=2.0)
    parser.add_argument("--minpts", type=int, default=1, help="Lin-DBSCAN cell threshold")
    parser.add_argument("--dbscan-minpts", type=int, default=4)
    parser.add_argument("--dbscan-max", type=int, default=200_000,
                        help="skip DBSCAN above this n (it is slow)")
    parser.add_argument("--backend", default="kdtree", choices=("kdtree", "grid", "brute"))
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", help="write all reports here")
    args = parser.parse_args(argv)

    eps = 2 * math.sqrt(2) * args.gamma
    reports, prev = [], None
    print(f"{'n':>9} {'lin ms':>9} {'ratio':>6} {'dbscan ms':>10} {'speed-up':>8}")
    for n in args.sizes:
        pts = uniform_points(n, 2, seed=args.seed + n)
        lin = bench(pts, "lin", dataset=f"uniform{n}", repeats=args.repeats,
                    gamma=args.gamma, min_pts=args.minpts)
        reports.append(lin.as_dict())
        ratio = f"{lin.elapsed / prev:.2f}" if prev else ""
        prev = lin.elapsed
        db_ms = speed = ""
        if n <= args.dbscan_max:
            db = bench(pts, "dbscan", dataset=f"uniform{n}", repeats=1, eps=eps,
                       min_pts=args.dbscan_minpts, backend=args.backend)
            reports.append(db.as_dict())
            db_ms, speed = f"{db.elapsed:.0f}", f"{db.elapsed / lin.elapsed:.1f}"
        print(f"{n:>9} {lin.elapsed:>9.1f} {ratio:>6} {db_ms:>10} {speed:>8}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)


if __name__ == "__main__":
    main()
