"""Grid value type, invariants, and object segmentation.

A grid is a rectangular array of symbols 0-9 with height and width in
[1, 30]. Grids are immutable after construction and all operations here
are pure, so values can be shared freely across workers.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DimensionError, SymbolError

MIN_DIM = 1
MAX_DIM = 30
N_SYMBOLS = 10

_NEIGHBORS_4 = ((-1, 0), (0, -1), (0, 1), (1, 0))
_NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def validate_symbol(value: int) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise SymbolError(f"symbol must be an integer, got {value!r}")
    if not 0 <= value < N_SYMBOLS:
        raise SymbolError(f"symbol {value} outside [0, {N_SYMBOLS - 1}]")
    return int(value)


def _validate_dims(height: int, width: int) -> None:
    if not (MIN_DIM <= height <= MAX_DIM and MIN_DIM <= width <= MAX_DIM):
        raise DimensionError(
            f"dimensions {height}x{width} outside [{MIN_DIM}, {MAX_DIM}]"
        )


class Grid:
    """Immutable rectangular array of symbols, row-major, origin top-left."""

    __slots__ = ("a", "_hash")

    def __init__(self, array: np.ndarray):
        a = np.asarray(array, dtype=np.int8)
        if a.ndim != 2:
            raise DimensionError(f"grid array must be 2-D, got ndim={a.ndim}")
        _validate_dims(a.shape[0], a.shape[1])
        if a.min() < 0 or a.max() >= N_SYMBOLS:
            raise SymbolError("grid contains symbols outside [0, 9]")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Grid is immutable")

    @property
    def height(self) -> int:
        return self.a.shape[0]

    @property
    def width(self) -> int:
        return self.a.shape[1]

    @property
    def cells(self) -> tuple[int, ...]:
        """Row-major symbol sequence of length height*width."""
        return tuple(int(v) for v in self.a.ravel())

    def tolists(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.a]

    def tobytes(self) -> bytes:
        return self.a.shape[0].to_bytes(1, "big") + self.a.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.a.shape == other.a.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.a.shape, self.a.tobytes()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        rows = ["".join(str(int(v)) for v in row) for row in self.a]
        return f"Grid({self.height}x{self.width} {'|'.join(rows)})"


def new_grid(height: int, width: int, fill: int = 0) -> Grid:
    """Uniform grid of the given dimensions."""
    _validate_dims(height, width)
    validate_symbol(fill)
    return Grid(np.full((height, width), fill, dtype=np.int8))


def grid_from_lists(rows: list[list[int]]) -> Grid:
    """Build a grid from nested lists, checking all invariants."""
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise DimensionError("grid rows must be a nonempty list of lists")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError("ragged rows: all rows must have equal length")
    _validate_dims(len(rows), width)
    for r in rows:
        for v in r:
            validate_symbol(v)
    return Grid(np.array(rows, dtype=np.int8))


def grids_equal(a: Grid, b: Grid) -> bool:
    """True iff dimensions and every cell are equal."""
    return a == b


@lru_cache(maxsize=1 << 16)
def infer_background(g: Grid) -> int:
    """Most frequent symbol; ties prefer 0, then the smallest value."""
    counts = np.bincount(g.a.ravel(), minlength=10)
    best = max(range(10), key=lambda s: (counts[s], s == 0, -s))
    return best


class ConnectivityMode(Enum):
    SAME_COLOR_4 = "same_color_4"
    SAME_COLOR_8 = "same_color_8"
    MULTICOLOR_4 = "multicolor_4"
    MULTICOLOR_8 = "multicolor_8"

    @property
    def diagonal(self) -> bool:
        return self in (ConnectivityMode.SAME_COLOR_8, ConnectivityMode.MULTICOLOR_8)

    @property
    def same_color(self) -> bool:
        return self in (ConnectivityMode.SAME_COLOR_4, ConnectivityMode.SAME_COLOR_8)


@dataclass(frozen=True)
class Connectivity:
    """Segmentation rule: neighborhood shape plus background symbol.

    ``background=None`` means "infer from the grid" at segmentation time.
    """

    mode: ConnectivityMode = ConnectivityMode.SAME_COLOR_4
    background: int | None = None


@dataclass(frozen=True)
class GridObject:
    """A connected component of non-background cells.

    ``cells`` holds (row, col, symbol) triples; the bounding box is the
    minimal rectangle containing them, and ``anchor`` its top-left corner.
    """

    cells: frozenset[tuple[int, int, int]]
    bounding_box: tuple[int, int, int, int] = field(init=False)

    def __post_init__(self):
        if not self.cells:
            raise ValueError("GridObject requires at least one cell")
        rs = [c[0] for c in self.cells]
        cs = [c[1] for c in self.cells]
        top, left = min(rs), min(cs)
        object.__setattr__(
            self, "bounding_box", (top, left, max(rs) - top + 1, max(cs) - left + 1)
        )

    @property
    def anchor(self) -> tuple[int, int]:
        return self.bounding_box[0], self.bounding_box[1]

    @property
    def size(self) -> int:
        return len(self.cells)

    def sorted_cells(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(sorted(self.cells))

    def colors(self) -> set[int]:
        return {c[2] for c in self.cells}

    def normalized_shape(self) -> frozenset[tuple[int, int]]:
        """Cell positions relative to the bounding box, colors ignored."""
        top, left = self.anchor
        return frozenset((r - top, c - left) for r, c, _ in self.cells)

    def translated(self, dr: int, dc: int) -> "GridObject":
        return GridObject(frozenset((r + dr, c + dc, s) for r, c, s in self.cells))

    def recolored(self, symbol: int) -> "GridObject":
        validate_symbol(symbol)
        return GridObject(frozenset((r, c, symbol) for r, c, _ in self.cells))


def segment_objects(g: Grid, conn: Connectivity = Connectivity()) -> list[GridObject]:
    """Connected components of non-background cells under ``conn``.

    SameColor modes require all cells of a component to share one symbol;
    Multicolor modes connect any non-background cells. The result is
    sorted by (anchor row, anchor col) with cell content as a final
    deterministic tie-break. An all-background grid yields [].
    """
    return list(_segment_cached(g, conn))


@lru_cache(maxsize=1 << 14)
def _segment_cached(g: Grid, conn: Connectivity) -> tuple[GridObject, ...]:
    bg = conn.background if conn.background is not None else infer_background(g)
    validate_symbol(bg)
    neighbors = _NEIGHBORS_8 if conn.mode.diagonal else _NEIGHBORS_4
    same_color = conn.mode.same_color
    a = g.a
    h, w = a.shape
    seen = np.zeros((h, w), dtype=bool)
    objects: list[GridObject] = []
    for r0 in range(h):
        for c0 in range(w):
            if seen[r0, c0] or a[r0, c0] == bg:
                continue
            color = a[r0, c0]
            comp: list[tuple[int, int, int]] = []
            queue = deque([(r0, c0)])
            seen[r0, c0] = True
            while queue:
                r, c = queue.popleft()
                comp.append((r, c, int(a[r, c])))
                for dr, dc in neighbors:
                    nr, nc = r + dr, c + dc
                    if 0 <= nr < h and 0 <= nc < w and not seen[nr, nc]:
                        v = a[nr, nc]
                        if v == bg or (same_color and v != color):
                            continue
                        seen[nr, nc] = True
                        queue.append((nr, nc))
            objects.append(GridObject(frozenset(comp)))
    objects.sort(key=lambda o: (o.anchor, o.sorted_cells()))
    return tuple(objects)
