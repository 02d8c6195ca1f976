"""Primitive catalog: implementations grouped by prior category.

Implementations are pure and raise EvalError for every anticipated bad
input (empty selections, oversize outputs, mismatched panels...). The
search treats those as dead candidates, so being strict here is cheap.
"""

from __future__ import annotations

from collections import Counter, deque

import numpy as np

from ..errors import EvalError
from ..grid import (
    MAX_DIM,
    Connectivity,
    ConnectivityMode,
    Grid,
    GridObject,
    infer_background,
    segment_objects,
)
from .lang import Category, Direction, DslType, PrimitiveSpec, register

G = DslType.GRID
O = DslType.OBJECT
OL = DslType.OBJECT_LIST
I = DslType.INT
C = DslType.COLOR
B = DslType.BOOL
CO = DslType.COORD
D = DslType.DIRECTION


def _prim(name, args, ret, category, impl=None, special=None, searchable=True):
    register(
        PrimitiveSpec(
            name=name,
            arg_types=tuple(args),
            ret_type=ret,
            category=category,
            impl=impl,
            special=special,
            searchable=searchable,
        )
    )


def _grid(a: np.ndarray) -> Grid:
    if a.ndim != 2 or not (1 <= a.shape[0] <= MAX_DIM and 1 <= a.shape[1] <= MAX_DIM):
        raise EvalError(f"result shape {a.shape} outside 1x1..{MAX_DIM}x{MAX_DIM}")
    return Grid(a)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise EvalError(msg)


# ---------------------------------------------------------------------------
# Objectness


def _segment_with(mode: ConnectivityMode):
    def run(g: Grid):
        return tuple(segment_objects(g, Connectivity(mode)))

    return run


def _largest(objs):
    _require(len(objs) > 0, "selector over empty object list")
    return max(objs, key=lambda o: o.size)


def _smallest(objs):
    _require(len(objs) > 0, "selector over empty object list")
    return min(objs, key=lambda o: o.size)


def _most_common_shape(objs):
    _require(len(objs) > 0, "selector over empty object list")
    counts = Counter(o.normalized_shape() for o in objs)
    best = max(counts.values())
    for o in objs:
        if counts[o.normalized_shape()] == best:
            return o
    raise EvalError("unreachable")


def _objects_by_color(objs, color):
    return tuple(o for o in objs if o.colors() == {color})


def _objects_of_size(objs, n):
    return tuple(o for o in objs if o.size == n)


def _object_color(obj):
    colors = obj.colors()
    _require(len(colors) == 1, "object is not single-colored")
    return next(iter(colors))


def _erase_object(g: Grid, obj: GridObject):
    bg = infer_background(g)
    a = np.array(g.a)
    for r, c, _ in obj.cells:
        if 0 <= r < a.shape[0] and 0 <= c < a.shape[1]:
            a[r, c] = bg
    return _grid(a)


def _paste_object(g: Grid, obj: GridObject):
    a = np.array(g.a)
    for r, c, s in obj.cells:
        if 0 <= r < a.shape[0] and 0 <= c < a.shape[1]:
            a[r, c] = s
    return _grid(a)


def _object_view(obj: GridObject):
    top, left, h, w = obj.bounding_box
    _require(h <= MAX_DIM and w <= MAX_DIM, "object view exceeds grid bounds")
    a = np.zeros((h, w), dtype=np.int8)
    for r, c, s in obj.cells:
        a[r - top, c - left] = s
    return _grid(a)


def _move_until_contact(g: Grid, obj: GridObject, d: Direction):
    bg = infer_background(g)
    a = g.a
    h, w = a.shape
    own = {(r, c) for r, c, _ in obj.cells}
    occupied = {
        (r, c)
        for r in range(h)
        for c in range(w)
        if a[r, c] != bg and (r, c) not in own
    }
    steps = 0
    while True:
        nxt = {(r + d.dr * (steps + 1), c + d.dc * (steps + 1)) for r, c in own}
        blocked = any(
            not (0 <= r < h and 0 <= c < w) or (r, c) in occupied for r, c in nxt
        )
        if blocked:
            break
        steps += 1
        if steps > MAX_DIM:
            break
    moved = obj.translated(d.dr * steps, d.dc * steps)
    return _paste_object(_erase_object(g, obj), moved)


def _gravity(g: Grid, d: Direction):
    objs = segment_objects(g, Connectivity(ConnectivityMode.MULTICOLOR_4))
    # Process the leading objects first so stacking is deterministic.
    objs = sorted(objs, key=lambda o: -(o.anchor[0] * d.dr + o.anchor[1] * d.dc))
    out = g
    for o in objs:
        out = _move_until_contact(out, o, d)
    return out


def _denoise(g: Grid):
    bg = infer_background(g)
    a = np.array(g.a)
    for o in segment_objects(g, Connectivity(ConnectivityMode.SAME_COLOR_4)):
        if o.size == 1:
            ((r, c, _),) = o.cells
            a[r, c] = bg
    return _grid(a)


def _recolor_object(obj: GridObject, color: int):
    return obj.recolored(color)


def _move_object(obj: GridObject, d: Direction, n: int):
    return obj.translated(d.dr * n, d.dc * n)


_prim("segment", [G], OL, Category.OBJECTNESS, _segment_with(ConnectivityMode.SAME_COLOR_4))
_prim("segment8", [G], OL, Category.OBJECTNESS, _segment_with(ConnectivityMode.SAME_COLOR_8))
_prim("segment_any", [G], OL, Category.OBJECTNESS, _segment_with(ConnectivityMode.MULTICOLOR_4))
_prim("segment_any8", [G], OL, Category.OBJECTNESS, _segment_with(ConnectivityMode.MULTICOLOR_8))
_prim("largest_object", [OL], O, Category.OBJECTNESS, _largest)
_prim("smallest_object", [OL], O, Category.OBJECTNESS, _smallest)
_prim("most_common_shape", [OL], O, Category.OBJECTNESS, _most_common_shape)
_prim("objects_by_color", [OL, C], OL, Category.OBJECTNESS, _objects_by_color)
_prim("objects_of_size", [OL, I], OL, Category.OBJECTNESS, _objects_of_size)
_prim("object_color", [O], C, Category.OBJECTNESS, _object_color)
_prim("erase_object", [G, O], G, Category.OBJECTNESS, _erase_object)
_prim("paste_object", [G, O], G, Category.OBJECTNESS, _paste_object)
_prim("object_view", [O], G, Category.OBJECTNESS, _object_view)
_prim("move_until_contact", [G, O, D], G, Category.OBJECTNESS, _move_until_contact)
_prim("gravity", [G, D], G, Category.OBJECTNESS, _gravity)
_prim("denoise", [G], G, Category.OBJECTNESS, _denoise)
_prim("recolor_object", [O, C], O, Category.OBJECTNESS, _recolor_object)
_prim("move_object", [O, D, I], O, Category.OBJECTNESS, _move_object)
_prim("this_object", [], O, Category.OBJECTNESS, special="this_object", searchable=False)
_prim("map_objects", [OL, O], OL, Category.PLUMBING, special="map_objects", searchable=False)


# ---------------------------------------------------------------------------
# Numbers and counting


def _count_colors(g: Grid):
    bg = infer_background(g)
    return len({int(v) for v in g.a.ravel() if v != bg})


def _count_cells(g: Grid, color: int):
    return int(np.count_nonzero(g.a == color))


def _color_counts(g: Grid):
    bg = infer_background(g)
    counts = Counter(int(v) for v in g.a.ravel() if v != bg)
    _require(bool(counts), "no non-background cells")
    return counts


def _most_common_color(g: Grid):
    counts = _color_counts(g)
    return max(counts.items(), key=lambda kv: (kv[1], -kv[0]))[0]


def _least_common_color(g: Grid):
    counts = _color_counts(g)
    return min(counts.items(), key=lambda kv: (kv[1], kv[0]))[0]


def _add(a: int, b: int):
    _require(a + b <= 900, "sum out of range")
    return a + b


def _sub(a: int, b: int):
    _require(a - b >= 0, "negative difference")
    return a - b


_prim("count_objects", [OL], I, Category.NUMBERS_COUNTING, lambda objs: len(objs))
_prim("count_colors", [G], I, Category.NUMBERS_COUNTING, _count_colors)
_prim("count_cells", [G, C], I, Category.NUMBERS_COUNTING, _count_cells)
_prim("object_size", [O], I, Category.NUMBERS_COUNTING, lambda o: o.size)
_prim("most_common_color", [G], C, Category.NUMBERS_COUNTING, _most_common_color)
_prim("least_common_color", [G], C, Category.NUMBERS_COUNTING, _least_common_color)
_prim("add", [I, I], I, Category.NUMBERS_COUNTING, _add)
_prim("sub", [I, I], I, Category.NUMBERS_COUNTING, _sub)
_prim("eq_int", [I, I], B, Category.NUMBERS_COUNTING, lambda a, b: a == b)
_prim("gt", [I, I], B, Category.NUMBERS_COUNTING, lambda a, b: a > b)


# ---------------------------------------------------------------------------
# Geometry and topology


def _translate(g: Grid, d: Direction, n: int):
    bg = infer_background(g)
    a = g.a
    out = np.full_like(a, bg)
    h, w = a.shape
    dr, dc = d.dr * n, d.dc * n
    src_r = slice(max(0, -dr), min(h, h - dr))
    src_c = slice(max(0, -dc), min(w, w - dc))
    dst_r = slice(max(0, dr), min(h, h + dr))
    dst_c = slice(max(0, dc), min(w, w + dc))
    out[dst_r, dst_c] = a[src_r, src_c]
    return _grid(out)


def _scale_up(g: Grid, k: int):
    _require(k >= 1, "scale factor must be >= 1")
    h, w = g.a.shape
    _require(h * k <= MAX_DIM and w * k <= MAX_DIM, "scaled grid exceeds 30x30")
    return _grid(np.kron(g.a, np.ones((k, k), dtype=np.int8)))


def _scale_down(g: Grid, k: int):
    _require(k >= 1, "scale factor must be >= 1")
    h, w = g.a.shape
    _require(h % k == 0 and w % k == 0, "dimensions not divisible by factor")
    out = np.zeros((h // k, w // k), dtype=np.int8)
    for r in range(h // k):
        for c in range(w // k):
            block = g.a[r * k : (r + 1) * k, c * k : (c + 1) * k].ravel()
            counts = Counter(int(v) for v in block)
            out[r, c] = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))[0]
    return _grid(out)


def _content_bbox(g: Grid):
    bg = infer_background(g)
    rows, cols = np.nonzero(g.a != bg)
    _require(rows.size > 0, "grid has no non-background content")
    return rows.min(), rows.max(), cols.min(), cols.max()


def _crop_to_content(g: Grid):
    r0, r1, c0, c1 = _content_bbox(g)
    return _grid(np.array(g.a[r0 : r1 + 1, c0 : c1 + 1]))


def _tile(g: Grid, nv: int, nh: int):
    _require(nv >= 1 and nh >= 1, "tile counts must be >= 1")
    h, w = g.a.shape
    _require(h * nv <= MAX_DIM and w * nh <= MAX_DIM, "tiled grid exceeds 30x30")
    return _grid(np.tile(g.a, (nv, nh)))


def _draw_line(g: Grid, a: tuple[int, int], b: tuple[int, int], color: int):
    (r0, c0), (r1, c1) = a, b
    h, w = g.a.shape
    _require(0 <= r0 < h and 0 <= c0 < w and 0 <= r1 < h and 0 <= c1 < w, "endpoint outside grid")
    dr, dc = r1 - r0, c1 - c0
    _require(dr == 0 or dc == 0 or abs(dr) == abs(dc), "endpoints not on a straight line")
    steps = max(abs(dr), abs(dc))
    sr = (dr > 0) - (dr < 0)
    sc = (dc > 0) - (dc < 0)
    out = np.array(g.a)
    for i in range(steps + 1):
        out[r0 + sr * i, c0 + sc * i] = color
    return _grid(out)


def _connect_same_color(g: Grid):
    bg = infer_background(g)
    a = np.array(g.a)
    h, w = a.shape

    def connect_runs(line, fixed, by_row):
        positions = [i for i, v in enumerate(line) if v != bg]
        for p, q in zip(positions, positions[1:]):
            if line[p] == line[q] and q - p > 1 and all(v == bg for v in line[p + 1 : q]):
                for i in range(p + 1, q):
                    if by_row:
                        a[fixed, i] = line[p]
                    else:
                        a[i, fixed] = line[p]

    for r in range(h):
        connect_runs(list(g.a[r, :]), r, True)
    for c in range(w):
        connect_runs(list(g.a[:, c]), c, False)
    return _grid(a)


def _straight_segments(g: Grid):
    """Same-color-8 components whose cells form a contiguous straight run."""
    segments = []
    for o in segment_objects(g, Connectivity(ConnectivityMode.SAME_COLOR_8)):
        if o.size < 2:
            continue
        cells = sorted((r, c) for r, c, _ in o.cells)
        (r0, c0), (r1, c1) = cells[0], cells[-1]
        dr, dc = r1 - r0, c1 - c0
        if not (dr == 0 or dc == 0 or abs(dr) == abs(dc)):
            continue
        steps = max(abs(dr), abs(dc))
        if steps + 1 != o.size:
            continue
        sr = (dr > 0) - (dr < 0)
        sc = (dc > 0) - (dc < 0)
        if {(r0 + sr * i, c0 + sc * i) for i in range(steps + 1)} == set(cells):
            color = next(iter(o.colors()))
            segments.append((o.size, (r0, c0), (r1, c1), (sr, sc), color))
    return segments


def _extend_line_rebound(g: Grid):
    """Grow the longest straight segment from both ends; diagonal rays
    reflect off walls and obstacles, orthogonal rays stop at them."""
    segs = _straight_segments(g)
    _require(bool(segs), "no straight line segment to extend")
    segs.sort(key=lambda s: (-s[0], s[1]))
    _, tail, head, (sr, sc), color = segs[0]
    bg = infer_background(g)
    a = np.array(g.a)
    h, w = a.shape

    def march(start, dr, dc):
        r, c = start
        seen = set()
        for _ in range(200):
            if (r, c, dr, dc) in seen:
                return
            seen.add((r, c, dr, dc))
            nr, nc = r + dr, c + dc
            if not (0 <= nr < h and 0 <= nc < w):
                if dr == 0 or dc == 0:
                    return
                if not 0 <= nr < h:
                    dr = -dr
                if not 0 <= nc < w:
                    dc = -dc
                nr, nc = r + dr, c + dc
                if not (0 <= nr < h and 0 <= nc < w):
                    return
            if a[nr, nc] != bg and a[nr, nc] != color:
                if dr == 0 or dc == 0:
                    return
                for cr, cc in ((-dr, dc), (dr, -dc), (-dr, -dc)):
                    tr, tc = r + cr, c + cc
                    if 0 <= tr < h and 0 <= tc < w and a[tr, tc] == bg:
                        dr, dc = cr, cc
                        nr, nc = tr, tc
                        break
                else:
                    return
            if a[nr, nc] == bg:
                a[nr, nc] = color
            r, c = nr, nc

    march(head, sr, sc)
    march(tail, -sr, -sc)
    return _grid(a)


def _symmetrize(g: Grid, mirror: np.ndarray):
    bg = infer_background(g)
    a = np.array(g.a)
    fill = (a == bg) & (mirror != bg)
    a[fill] = mirror[fill]
    return _grid(a)


def _border_reachable_bg(a: np.ndarray, bg: int) -> np.ndarray:
    h, w = a.shape
    reach = np.zeros((h, w), dtype=bool)
    queue = deque()
    for r in range(h):
        for c in (0, w - 1):
            if a[r, c] == bg and not reach[r, c]:
                reach[r, c] = True
                queue.append((r, c))
    for c in range(w):
        for r in (0, h - 1):
            if a[r, c] == bg and not reach[r, c]:
                reach[r, c] = True
                queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and not reach[nr, nc] and a[nr, nc] == bg:
                reach[nr, nc] = True
                queue.append((nr, nc))
    return reach


def _fill_enclosed(g: Grid, color: int):
    bg = infer_background(g)
    a = np.array(g.a)
    reach = _border_reachable_bg(g.a, bg)
    a[(g.a == bg) & ~reach] = color
    return _grid(a)


def _is_enclosed(g: Grid, obj: GridObject):
    bg = infer_background(g)
    h, w = g.a.shape
    reach = _border_reachable_bg(g.a, bg)
    for r, c, _ in obj.cells:
        if not (0 <= r < h and 0 <= c < w):
            return False
        if r in (0, h - 1) or c in (0, w - 1):
            return False
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and reach[nr, nc]:
                return False
    return True


def _filter_enclosed(g: Grid, objs):
    return tuple(o for o in objs if _is_enclosed(g, o))


def _project(g: Grid, d: Direction):
    bg = infer_background(g)
    a = np.array(g.a)
    h, w = a.shape
    for r in range(h):
        for c in range(w):
            if g.a[r, c] == bg:
                continue
            nr, nc = r + d.dr, c + d.dc
            while 0 <= nr < h and 0 <= nc < w and a[nr, nc] == bg:
                a[nr, nc] = g.a[r, c]
                nr, nc = nr + d.dr, nc + d.dc
    return _grid(a)


def _half(g: Grid, which: str):
    h, w = g.a.shape
    if which in ("left", "right"):
        k = w // 2
        _require(k >= 1, "grid too narrow to split")
        block = g.a[:, :k] if which == "left" else g.a[:, w - k :]
    else:
        k = h // 2
        _require(k >= 1, "grid too short to split")
        block = g.a[:k, :] if which == "top" else g.a[h - k :, :]
    return _grid(np.array(block))


def _hconcat(a: Grid, b: Grid):
    _require(a.height == b.height, "heights differ")
    _require(a.width + b.width <= MAX_DIM, "concatenation exceeds 30 columns")
    return _grid(np.hstack([a.a, b.a]))


def _vconcat(a: Grid, b: Grid):
    _require(a.width == b.width, "widths differ")
    _require(a.height + b.height <= MAX_DIM, "concatenation exceeds 30 rows")
    return _grid(np.vstack([a.a, b.a]))


_prim("rotate90", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _grid(np.rot90(g.a, -1)))
_prim("rotate180", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _grid(np.rot90(g.a, 2)))
_prim("rotate270", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _grid(np.rot90(g.a, 1)))
_prim("flip_h", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _grid(np.array(g.a[:, ::-1])))
_prim("flip_v", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _grid(np.array(g.a[::-1, :])))
_prim("transpose", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _grid(np.array(g.a.T)))
_prim("translate", [G, D, I], G, Category.GEOMETRY_TOPOLOGY, _translate)
_prim("scale_up", [G, I], G, Category.GEOMETRY_TOPOLOGY, _scale_up)
_prim("scale_down", [G, I], G, Category.GEOMETRY_TOPOLOGY, _scale_down)
_prim("crop_to_content", [G], G, Category.GEOMETRY_TOPOLOGY, _crop_to_content)
_prim("tile", [G, I, I], G, Category.GEOMETRY_TOPOLOGY, _tile)
_prim("draw_line", [G, CO, CO, C], G, Category.GEOMETRY_TOPOLOGY, _draw_line, searchable=False)
_prim("connect_same_color", [G], G, Category.GEOMETRY_TOPOLOGY, _connect_same_color)
_prim("extend_line_rebound", [G], G, Category.GEOMETRY_TOPOLOGY, _extend_line_rebound)
_prim("symmetrize_h", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _symmetrize(g, g.a[:, ::-1]))
_prim("symmetrize_v", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _symmetrize(g, g.a[::-1, :]))
_prim("fill_enclosed", [G, C], G, Category.GEOMETRY_TOPOLOGY, _fill_enclosed)
_prim("is_enclosed", [G, O], B, Category.GEOMETRY_TOPOLOGY, _is_enclosed)
_prim("filter_enclosed", [G, OL], OL, Category.GEOMETRY_TOPOLOGY, _filter_enclosed)
_prim("project", [G, D], G, Category.GEOMETRY_TOPOLOGY, _project)
_prim("left_half", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _half(g, "left"))
_prim("right_half", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _half(g, "right"))
_prim("top_half", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _half(g, "top"))
_prim("bottom_half", [G], G, Category.GEOMETRY_TOPOLOGY, lambda g: _half(g, "bottom"))
_prim("hconcat", [G, G], G, Category.GEOMETRY_TOPOLOGY, _hconcat)
_prim("vconcat", [G, G], G, Category.GEOMETRY_TOPOLOGY, _vconcat)


# ---------------------------------------------------------------------------
# Goal-directedness


def _shortest_path(g: Grid, start_color: int, goal_color: int, path_color: int):
    """Shortest 4-connected route over background cells from the start
    marker to the goal marker; the route (between the markers) is drawn
    with ``path_color``. Deterministic tie-breaking."""
    bg = infer_background(g)
    a = g.a
    h, w = a.shape
    starts = [(r, c) for r in range(h) for c in range(w) if a[r, c] == start_color]
    goals = [(r, c) for r in range(h) for c in range(w) if a[r, c] == goal_color]
    _require(bool(starts), "no start marker")
    _require(bool(goals), "no goal marker")
    _require(start_color != bg and goal_color != bg, "marker color equals background")

    dist = np.full((h, w), -1, dtype=np.int32)
    queue = deque()
    for r, c in goals:
        dist[r, c] = 0
        queue.append((r, c))
    order = ((-1, 0), (0, -1), (0, 1), (1, 0))
    while queue:
        r, c = queue.popleft()
        for dr, dc in order:
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and dist[nr, nc] < 0:
                if a[nr, nc] == bg or (nr, nc) in starts:
                    dist[nr, nc] = dist[r, c] + 1
                    queue.append((nr, nc))
    reachable = [(dist[r, c], (r, c)) for r, c in starts if dist[r, c] >= 0]
    _require(bool(reachable), "goal unreachable from start")
    _, (r, c) = min(reachable)
    out = np.array(a)
    while dist[r, c] > 1:
        for dr, dc in order:
            nr, nc = r + dr, c + dc
            if 0 <= nr < h and 0 <= nc < w and dist[nr, nc] == dist[r, c] - 1 and a[nr, nc] == bg:
                out[nr, nc] = path_color
                r, c = nr, nc
                break
        else:
            raise EvalError("path reconstruction failed")
    return _grid(out)


_prim("shortest_path", [G, C, C, C], G, Category.GOAL_DIRECTEDNESS, _shortest_path)


# ---------------------------------------------------------------------------
# Plumbing


def _new_canvas(h: int, w: int, fill: int):
    _require(1 <= h <= MAX_DIM and 1 <= w <= MAX_DIM, "canvas dimensions outside 1..30")
    return _grid(np.full((h, w), fill, dtype=np.int8))


def _canvas_like(g: Grid, fill: int):
    return _grid(np.full_like(g.a, fill))


def _replace_color(g: Grid, old: int, new: int):
    a = np.array(g.a)
    a[g.a == old] = new
    return _grid(a)


def _mask_op(op: str):
    def run(a: Grid, b: Grid, color: int):
        _require(a.a.shape == b.a.shape, "panel dimensions differ")
        ma = a.a != infer_background(a)
        mb = b.a != infer_background(b)
        if op == "and":
            m = ma & mb
        elif op == "or":
            m = ma | mb
        elif op == "xor":
            m = ma ^ mb
        else:
            m = ma & ~mb
        out = np.zeros_like(a.a)
        out[m] = color
        return _grid(out)

    return run


_prim("identity", [], G, Category.PLUMBING, special="identity")
_prim("compose", [G, G], G, Category.PLUMBING, special="compose", searchable=False)
_prim("branch", [B, G, G], G, Category.PLUMBING, special="branch", searchable=False)
_prim("new_canvas", [I, I, C], G, Category.PLUMBING, _new_canvas)
_prim("canvas_like", [G, C], G, Category.PLUMBING, _canvas_like)
_prim("replace_color", [G, C, C], G, Category.PLUMBING, _replace_color)
_prim("mask_and", [G, G, C], G, Category.PLUMBING, _mask_op("and"))
_prim("mask_or", [G, G, C], G, Category.PLUMBING, _mask_op("or"))
_prim("mask_xor", [G, G, C], G, Category.PLUMBING, _mask_op("xor"))
_prim("mask_diff", [G, G, C], G, Category.PLUMBING, _mask_op("diff"))
