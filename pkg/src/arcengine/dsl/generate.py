"""Seeded random generation of well-typed programs (fixtures, fuzzing)."""

from __future__ import annotations

import random

from .lang import Apply, Direction, DslType, Literal, Program, catalog

_LEAF_LITERALS = (DslType.COLOR, DslType.INT, DslType.DIRECTION, DslType.COORD)


def _random_literal(kind: DslType, rng: random.Random) -> Literal:
    if kind is DslType.COLOR or kind is DslType.INT:
        return Literal(kind, rng.randrange(10))
    if kind is DslType.DIRECTION:
        return Literal(kind, rng.choice(list(Direction)))
    return Literal(DslType.COORD, (rng.randrange(30), rng.randrange(30)))


def random_program(
    rng: random.Random,
    max_depth: int = 4,
    special_forms: bool = True,
    max_nodes: int = 24,
) -> Program:
    """A random well-typed grid program; always passes type_check."""
    prims = [s for s in catalog() if special_forms or s.special is None]
    by_ret: dict[DslType, list] = {}
    for s in prims:
        by_ret.setdefault(s.ret_type, []).append(s)
    for group in by_ret.values():
        group.sort(key=lambda s: s.name)
    budget = [max_nodes]

    def leaf(t: DslType, in_map: bool):
        if t is DslType.GRID:
            budget[0] -= 1
            return Apply("identity")
        if t is DslType.OBJECT:
            if in_map and rng.random() < 0.5 and special_forms:
                budget[0] -= 1
                return Apply("this_object")
            budget[0] -= 3
            return Apply("largest_object", (Apply("segment", (Apply("identity"),)),))
        if t is DslType.OBJECT_LIST:
            budget[0] -= 2
            return Apply("segment", (Apply("identity"),))
        if t is DslType.BOOL:
            budget[0] -= 1
            return Apply(
                "eq_int",
                (_random_literal(DslType.INT, rng), _random_literal(DslType.INT, rng)),
            )
        return _random_literal(t, rng)

    def grow(t: DslType, depth: int, in_map: bool):
        if t in _LEAF_LITERALS and (depth <= 0 or rng.random() < 0.7):
            return _random_literal(t, rng)
        # Keep headroom: the deepest forced leaf chain costs a few nodes.
        if depth <= 0 or budget[0] <= 4:
            return leaf(t, in_map)
        options = [
            s
            for s in by_ret.get(t, [])
            if s.special != "this_object" or (in_map and special_forms)
        ]
        if not options:
            return leaf(t, in_map)
        spec = rng.choice(options)
        if spec.special == "this_object":
            budget[0] -= 1
            return Apply("this_object")
        budget[0] -= 1
        if spec.arity == 0:
            return Apply(spec.name)
        args = []
        for i, at in enumerate(spec.arg_types):
            inner_map = in_map or (spec.special == "map_objects" and i == 1)
            args.append(grow(at, depth - 1, inner_map))
        return Apply(spec.name, tuple(args))

    from .lang import node_count

    while True:  # soft budget keeps rejection rare; bound is exact
        budget[0] = max_nodes
        p = grow(DslType.GRID, max_depth, False)
        if node_count(p) <= max_nodes:
            return p


def random_grid_lists(rng: random.Random, max_dim: int = 8) -> list[list[int]]:
    h = rng.randint(1, max_dim)
    w = rng.randint(1, max_dim)
    # Skew towards a dominant background symbol so segmentation is natural.
    bg = rng.randrange(3)
    return [
        [bg if rng.random() < 0.6 else rng.randrange(10) for _ in range(w)]
        for _ in range(h)
    ]
