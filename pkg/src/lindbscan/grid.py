"""Uniform grid over the data space: cell binning and Moore-neighbourhood lookup."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

CellCoords = tuple[int, ...]

# cell indices stay exactly representable as floats and their spans fit int64
_MAX_INDEX = 2.0**53


def as_points(points, dims: int | None = None) -> np.ndarray:
    """Coerce ``points`` to a finite ``(n, d)`` float array.

    Row ``i`` of the result is the point with row index ``i``. An empty
    sequence gives a ``(0, dims)`` array (``dims`` defaults to 0).
    """
    if isinstance(points, np.ndarray) and points.dtype.kind in "fiu":
        arr = points.astype(np.float64, copy=False)
    else:
        try:
            arr = np.asarray(points, dtype=np.float64)
        except ValueError as exc:
            raise ValueError(f"points must share one dimensionality: {exc}") from None
    if arr.size == 0 and arr.ndim <= 1:
        return np.empty((0, dims or 0))
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected an (n, d) array of points, got shape {arr.shape}")
    if dims is not None and arr.shape[1] != dims:
        raise ValueError(f"expected {dims}-dimensional points, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma <= 0:
        raise ValueError(f"gamma must be a positive finite number, got {gamma!r}")
    return gamma


def cell_coords(point, gamma: float) -> CellCoords:
    """Index vector of the cell containing ``point``.

    Uses the mathematical floor, so ``-0.1`` with ``gamma=0.5`` lands in
    cell ``-1`` rather than ``0``. A coordinate lying exactly on a grid
    line belongs to the higher-index cell.
    """
    gamma = _check_gamma(gamma)
    p = np.atleast_1d(np.asarray(point, dtype=np.float64))
    if p.ndim != 1 or not np.all(np.isfinite(p)):
        raise ValueError("point must be a finite coordinate vector")
    with np.errstate(over="ignore"):
        scaled = np.floor(p / gamma)
    if np.any(np.abs(scaled) >= _MAX_INDEX):
        raise ValueError("coordinate / gamma overflows the cell index range")
    return tuple(int(v) for v in scaled)


class Cell:
    """A non-empty grid cell holding the row indices of its points.

    ``points`` may be a view into an index array shared by the whole grid.
    """

    __slots__ = ("coords", "points")

    def __init__(self, coords: CellCoords, points):
        self.coords = coords
        self.points = np.asarray(points, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def num_points(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return f"Cell(coords={self.coords}, num_points={len(self.points)})"


@dataclass(eq=False)
class Grid:
    """Hash map from cell index vectors to non-empty cells.

    Cells are kept in order of first appearance of one of their points,
    which makes :meth:`first_cell` (and therefore cluster numbering)
    deterministic.
    """

    gamma: float
    dims: int
    cells: dict[CellCoords, Cell] = field(default_factory=dict)
    n_points: int = 0

    def __post_init__(self):
        self._order = list(self.cells)
        self._cursor = 0

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, coords) -> bool:
        return coords in self.cells

    def get_cell(self, coords: CellCoords) -> Cell | None:
        return self.cells.get(coords)

    def remove(self, cell: Cell) -> None:
        del self.cells[cell.coords]

    def first_cell(self) -> Cell | None:
        """Earliest-inserted cell still in the grid, or ``None`` when empty."""
        # A cursor avoids rescanning the deleted prefix of the dict on every call.
        while self._cursor < len(self._order):
            cell = self.cells.get(self._order[self._cursor])
            if cell is not None:
                return cell
            self._cursor += 1
        return None

    @cached_property
    def offsets(self) -> np.ndarray:
        """All ``3**d`` offsets in {-1, 0, 1}^d, zero offset included.

        Row ``k`` holds digit ``j`` of ``k`` in base 3, minus one, for
        dimension ``j``.
        """
        k = np.arange(3**self.dims)
        cols = [(k // 3**j) % 3 - 1 for j in range(self.dims)]
        return np.stack(cols, axis=1).astype(np.int64) if cols else np.zeros((1, 0), np.int64)

    def cardinalities(self) -> dict[CellCoords, int]:
        return {coords: len(cell) for coords, cell in self.cells.items()}


def build_grid(points, gamma: float) -> Grid:
    """Bin every point into the cell ``floor(p / gamma)``.

    Exactly one :class:`Cell` is stored per occupied index vector and
    empty cells are never stored. Duplicate points are kept as separate
    entries of the same cell.
    """
    gamma = _check_gamma(gamma)
    pts = as_points(points)
    n, d = pts.shape
    if n == 0:
        return Grid(gamma=gamma, dims=d)
    with np.errstate(over="ignore"):
        scaled = np.floor(pts / gamma)
    if np.any(np.abs(scaled) >= _MAX_INDEX):
        raise ValueError("coordinate / gamma overflows the cell index range")
    keys = scaled.astype(np.int64)

    # Group rows by cell with one stable sort; the first row of each run is
    # the cell's earliest point. The dict itself is keyed by index tuples.
    packed = _pack(keys)
    if packed is None:
        order = np.lexsort(keys.T[::-1])
        sorted_keys = keys[order]
        change = np.any(sorted_keys[1:] != sorted_keys[:-1], axis=1)
    else:
        order = np.argsort(packed, kind="stable")
        sorted_packed = packed[order]
        change = sorted_packed[1:] != sorted_packed[:-1]
    starts = np.concatenate(([0], np.flatnonzero(change) + 1))
    ends = np.append(starts[1:], n)
    # cells in order of their first point; lexsort is stable too
    by_first = np.argsort(order[starts], kind="stable")
    starts, ends = starts[by_first], ends[by_first]
    coords = map(tuple, keys[order[starts]].tolist())
    cells = {
        c: Cell(c, order[a:b])
        for c, a, b in zip(coords, starts.tolist(), ends.tolist())
    }
    return Grid(gamma=gamma, dims=d, cells=cells, n_points=n)


def _pack(keys: np.ndarray) -> np.ndarray | None:
    """Mixed-radix scalar per row preserving equality, or ``None`` on overflow."""
    lo = keys.min(axis=0)
    span = keys.max(axis=0) - lo + 1
    total = 1
    for s in span.tolist():
        total *= s
    if total >= 2**62:
        return None
    packed = np.zeros(len(keys), dtype=np.int64)
    for k in range(keys.shape[1]):
        packed *= span[k]
        packed += keys[:, k] - lo[k]
    return packed


def find_neighbors(grid: Grid, cell: Cell) -> list[Cell]:
    """Cells currently stored in ``grid`` within Chebyshev distance 1 of ``cell``.

    All ``3**d`` offsets are probed, including the zero offset, so the
    query cell itself is returned if it is still stored.
    """
    c = cell.coords
    if len(c) != grid.dims:
        raise ValueError(f"cell has {len(c)} dims, grid has {grid.dims}")
    get = grid.cells.get
    if grid.dims == 2:
        x, y = c
        probes = [(x + a, y + b) for a, b in _OFFSETS_2D]
    elif grid.dims == 3:
        x, y, z = c
        probes = [(x + a, y + b, z + e) for a, b, e in _OFFSETS_3D]
    elif grid.dims == 1:
        (x,) = c
        probes = [(x - 1,), (x,), (x + 1,)]
    else:
        probes = map(tuple, (grid.offsets + np.asarray(c, np.int64)).tolist())
    return [nb for nb in map(get, probes) if nb is not None]


def _offsets(dims: int) -> list[CellCoords]:
    # dimension 0 varies fastest, as in Grid.offsets
    return [tuple(reversed(o)) for o in itertools.product((-1, 0, 1), repeat=dims)]


_OFFSETS_2D = _offsets(2)
_OFFSETS_3D = _offsets(3)
