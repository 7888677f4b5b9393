"""Delimited-text datasets, assignment files, synthetic generators, benchmark manifest."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DELIMITERS = ("auto", "comma", "whitespace")


@dataclass(frozen=True)
class DatasetSpec:
    path: str | os.PathLike
    delimiter: str = "auto"
    label_column: int | None = None


@dataclass
class Dataset:
    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = ""

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def dims(self) -> int:
        return self.points.shape[1]


class DatasetError(ValueError):
    pass


def _splitter(delimiter: str, first_row: str):
    if delimiter == "auto":
        delimiter = "comma" if "," in first_row else "whitespace"
    if delimiter in ("comma", ","):
        return lambda line: [f.strip() for f in line.split(",")]
    if delimiter in ("whitespace", "ws"):
        return str.split
    raise DatasetError(f"unknown delimiter {delimiter!r}; choose from {DELIMITERS}")


def load_dataset(spec: DatasetSpec | str | os.PathLike) -> Dataset:
    """Read points (and optionally a label column) from a delimited text file.

    Blank lines and ``#`` comments are skipped. Row index ``i`` is the
    ``i``-th data row. A non-numeric first row is treated as a header.
    ``label_column`` may be negative to count from the end.
    """
    if not isinstance(spec, DatasetSpec):
        spec = DatasetSpec(spec)
    path = Path(spec.path)
    rows: list[list[float]] = []
    labels: list[str] = []
    split = None
    width = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if split is None:
                split = _splitter(spec.delimiter, line)
            fields = split(line)
            if width is None:
                width = len(fields)
                if spec.label_column is not None and not -width <= spec.label_column < width:
                    raise DatasetError(f"{path}:{lineno}: label column {spec.label_column} "
                                       f"out of range for {width} columns")
            elif len(fields) != width:
                raise DatasetError(f"{path}:{lineno}: expected {width} columns, got {len(fields)}")
            if spec.label_column is not None:
                label = fields.pop(spec.label_column)
            try:
                values = [float(f) for f in fields]
            except ValueError:
                if not rows:
                    width = None  # header row
                    split = None
                    continue
                raise DatasetError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if not all(np.isfinite(values)):
                raise DatasetError(f"{path}:{lineno}: non-finite coordinate")
            rows.append(values)
            if spec.label_column is not None:
                labels.append(label)
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    points = np.array(rows, dtype=np.float64)
    return Dataset(points, np.array(labels) if spec.label_column is not None else None, path.stem)


def save_points(path, points, labels=None, delimiter: str = ",") -> None:
    """Write one point per line with full float precision (``repr``)."""
    points = np.asarray(points, dtype=np.float64)
    with open(path, "w") as fh:
        for i, row in enumerate(points.tolist()):
            fields = [repr(v) for v in row]
            if labels is not None:
                fields.append(str(labels[i]))
            fh.write(delimiter.join(fields) + "\n")


def write_assignments(path, labels) -> None:
    """Write ``row_index,cluster_id`` lines; noise is ``-1``."""
    with open(path, "w") as fh:
        fh.write("row_index,cluster_id\n")
        for i, c in enumerate(np.asarray(labels).tolist()):
            fh.write(f"{i},{c}\n")


def read_assignments(path) -> np.ndarray:
    """Labels indexed by row from a ``row_index,label`` file (header optional).

    Labels are returned as strings unless every one is an integer.
    """
    entries: dict[int, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in re.split(r"[,\s]+", line, maxsplit=1)]
            if len(parts) != 2:
                raise DatasetError(f"{path}:{lineno}: expected 'row_index,label'")
            try:
                row = int(parts[0])
            except ValueError:
                if lineno == 1 or not entries:
                    continue  # header
                raise DatasetError(f"{path}:{lineno}: bad row index {parts[0]!r}") from None
            if row in entries:
                raise DatasetError(f"{path}:{lineno}: duplicate row index {row}")
            entries[row] = parts[1]
    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise DatasetError(f"{path}: row indices must cover 0..{n - 1} exactly once")
    values = [entries[i] for i in range(n)]
    try:
        return np.array([int(v) for v in values], dtype=np.int64)
    except ValueError:
        return np.array(values)


def uniform_points(n: int, dims: int = 2, side: float | None = None, seed: int = 0) -> np.ndarray:
    """``n`` uniform points in ``[0, side)^dims``; ``side`` defaults to ``n**(1/dims)`` (unit density)."""
    if n <= 0:
        raise ValueError("n must be positive")
    if dims < 1:
        raise ValueError("dims must be positive")
    if side is None:
        side = n ** (1.0 / dims)
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, side, size=(n, dims))


def gamma_for_occupancy(n: int, dims: int, side: float, occupancy: float) -> float:
    """Cell size giving ``occupancy`` points per cell on average for uniform data."""
    return side * (occupancy / n) ** (1.0 / dims)


def box_shape(n_cells: int, dims: int) -> list[int]:
    """Cells per axis with product ``n_cells``, as even as the prime factors allow.

    Lets uniform data in different dimensionalities occupy exactly the
    same number of cells, e.g. 288 -> [3, 3, 2, 2, 2, 2] in 6-D.
    """
    factors, m, p = [], n_cells, 2
    while m > 1:
        while m % p == 0:
            factors.append(p)
            m //= p
        p += 1
    if len(factors) < dims:
        raise ValueError(f"{n_cells} has fewer than {dims} prime factors")
    shape = [1] * dims
    for f in sorted(factors, reverse=True):
        shape[shape.index(min(shape))] *= f
    return shape


def uniform_box(n: int, shape, gamma: float = 1.0, seed: int = 0) -> np.ndarray:
    """``n`` uniform points filling a box of ``shape[k]`` cells of size ``gamma`` per axis."""
    rng = np.random.default_rng(seed)
    sides = gamma * np.asarray(shape, dtype=np.float64)
    return rng.uniform(0.0, 1.0, size=(n, len(sides))) * sides


def blobs(centers, n_per: int, spread: float, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian blobs with their generating index as ground truth."""
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=np.float64)
    pts = np.concatenate([c + spread * rng.standard_normal((n_per, len(c))) for c in centers])
    return pts, np.repeat(np.arange(len(centers)), n_per)


@dataclass(frozen=True)
class Benchmark:
    name: str
    filename: str
    url: str
    n_points: int
    label_column: int | None = -1


# Public benchmark files. Nothing is downloaded; place the files in a data
# directory (see data_dir) to enable the comparisons that use them.
BENCHMARKS = {
    "aggregation": Benchmark("Aggregation", "Aggregation.txt",
                             "http://cs.joensuu.fi/sipu/datasets/Aggregation.txt", 788),
    "pathbased": Benchmark("Pathbased", "pathbased.txt",
                           "http://cs.joensuu.fi/sipu/datasets/pathbased.txt", 300),
    "spiral": Benchmark("Spiral", "spiral.txt",
                        "https://cs.joensuu.fi/sipu/datasets/spiral.txt", 312),
    "mouse": Benchmark("Mouse", "mouse.csv",
                       "http://elki.dbs.ifi.lmu.de/datasets/mouse.csv", 500),
    "vary-density": Benchmark("Vary density", "vary-density.csv",
                              "http://elki.dbs.ifi.lmu.de/datasets/vary-density.csv", 150),
    "multiple-gaussian-2d": Benchmark(
        "Multiple Gaussians 2D", "multiple-gaussian-2d.csv",
        "http://elki.dbs.ifi.lmu.de/browser/elki/trunk/data/synthetic/LoOP-publication/"
        "multiple-gaussian-2d/multiple-gaussian-2d.csv", 110),
    "t4.8k": Benchmark("t4.8k", "t4.8k.dat",
                       "http://glaros.dtc.umn.edu/gkhome/fetch/sw/cluto/chameleon-data.tar.gz",
                       8000, None),
    "t5.8k": Benchmark("t5.8k", "t5.8k.dat",
                       "http://glaros.dtc.umn.edu/gkhome/fetch/sw/cluto/chameleon-data.tar.gz",
                       8000, None),
    "t7.10k": Benchmark("t7.10k", "t7.10k.dat",
                        "http://glaros.dtc.umn.edu/gkhome/fetch/sw/cluto/chameleon-data.tar.gz",
                        10000, None),
    "t8.8k": Benchmark("t8.8k", "t8.8k.dat",
                       "http://glaros.dtc.umn.edu/gkhome/fetch/sw/cluto/chameleon-data.tar.gz",
                       8000, None),
}


def data_dir() -> Path:
    """``$LINDBSCAN_DATA_DIR`` if set, else ``data/`` at the repository root."""
    env = os.environ.get("LINDBSCAN_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data"


def find_benchmark(key: str) -> Path | None:
    """Path of a benchmark file if present (case-insensitive filename match)."""
    bench = BENCHMARKS[key]
    root = data_dir()
    if not root.is_dir():
        return None
    wanted = bench.filename.lower()
    for p in root.iterdir():
        if p.name.lower() == wanted:
            return p
    return None


def load_benchmark(key: str) -> Dataset:
    path = find_benchmark(key)
    if path is None:
        raise FileNotFoundError(
            f"{BENCHMARKS[key].filename} not found in {data_dir()} (source: {BENCHMARKS[key].url})"
        )
    ds = load_dataset(DatasetSpec(path, label_column=BENCHMARKS[key].label_column))
    ds.name = BENCHMARKS[key].name
    return ds
