"""Lin-DBSCAN time against dimensionality at a fixed number of occupied cells.

For each d the points fill a box of exactly ``--cells`` unit cells, so
the mean occupancy is the same in every dimension and only the 3**d
neighbourhood probe grows.

    python scripts/dimensionality.py --n 150000 --cells 576
"""

import argparse

from lindbscan.bench import median_times_interleaved
from lindbscan.datasets import box_shape, uniform_box
from lindbscan.engine import LinDbscanParams, lin_dbscan


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=150_000)
    parser.add_argument("--cells", type=int, default=576)
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    parser.add_argument("--repeats", type=int, default=15)
    args = parser.parse_args(argv)

    shapes = [box_shape(args.cells, d) for d in args.dims]
    data = [uniform_box(args.n, shape, 1.0, seed=d) for d, shape in zip(args.dims, shapes)]
    runs = [lambda pts=pts: lin_dbscan(pts, LinDbscanParams(1.0, 1)) for pts in data]
    times = median_times_interleaved(runs, args.repeats)
    print(f"{'d':>2} {'box':<20} {'ms':>8} {'vs first':>8}")
    for d, shape, t in zip(args.dims, shapes, times):
        print(f"{d:>2} {'x'.join(map(str, shape)):<20} {t * 1e3:>8.1f} {t / times[0]:>8.2f}")

if __name__ == "__main__":
    main()
