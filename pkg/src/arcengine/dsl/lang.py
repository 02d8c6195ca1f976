"""Typed expression language over grids: AST, catalog, coding, text form.

An expression denotes a function of the current "focus" grid (the program
input at the root). ``identity`` is the leaf that returns the focus grid,
so a whole program is simply an expression of grid type. Literals are
restricted to colors, small ints, directions, and coordinates, and carry
fixed bit costs; primitive nodes are priced by the catalog coding.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

from ..errors import ParseError


class DslType(Enum):
    GRID = "Grid"
    OBJECT = "Object"
    OBJECT_LIST = "ObjectList"
    INT = "Int"
    COLOR = "Color"
    BOOL = "Bool"
    COORD = "Coord"
    DIRECTION = "Direction"


class Direction(Enum):
    UP = (-1, 0)
    DOWN = (1, 0)
    LEFT = (0, -1)
    RIGHT = (0, 1)
    UP_LEFT = (-1, -1)
    UP_RIGHT = (-1, 1)
    DOWN_LEFT = (1, -1)
    DOWN_RIGHT = (1, 1)

    @property
    def dr(self) -> int:
        return self.value[0]

    @property
    def dc(self) -> int:
        return self.value[1]

    @property
    def diagonal(self) -> bool:
        return self.dr != 0 and self.dc != 0


DIRECTION_NAMES = {d.name.lower(): d for d in Direction}

# Literal bit costs: uniform coding over each literal family.
COLOR_LITERAL_BITS = math.log2(10)
INT_LITERAL_BITS = math.log2(10)
DIRECTION_LITERAL_BITS = 3.0  # 8 directions
COORD_LITERAL_BITS = 2 * math.log2(30)

LITERAL_KINDS = (DslType.COLOR, DslType.INT, DslType.DIRECTION, DslType.COORD)


@dataclass(frozen=True)
class Literal:
    kind: DslType
    value: object  # int, Direction, or (row, col)

    def bits(self) -> float:
        return _LITERAL_BITS[self.kind]

    def in_range(self) -> bool:
        if self.kind in (DslType.COLOR, DslType.INT):
            return isinstance(self.value, int) and 0 <= self.value <= 9
        if self.kind is DslType.DIRECTION:
            return isinstance(self.value, Direction)
        if self.kind is DslType.COORD:
            v = self.value
            return (
                isinstance(v, tuple)
                and len(v) == 2
                and all(isinstance(x, int) and 0 <= x < 30 for x in v)
            )
        return False


_LITERAL_BITS = {
    DslType.COLOR: COLOR_LITERAL_BITS,
    DslType.INT: INT_LITERAL_BITS,
    DslType.DIRECTION: DIRECTION_LITERAL_BITS,
    DslType.COORD: COORD_LITERAL_BITS,
}


@dataclass(frozen=True)
class Apply:
    """Application of a catalog primitive to typed children."""

    name: str
    args: tuple[Union["Apply", Literal], ...] = ()


Expr = Union[Apply, Literal]
Program = Apply  # a program is a grid-typed expression over the input grid


class Category(Enum):
    OBJECTNESS = "Objectness"
    GOAL_DIRECTEDNESS = "GoalDirectedness"
    NUMBERS_COUNTING = "NumbersCounting"
    GEOMETRY_TOPOLOGY = "GeometryTopology"
    PLUMBING = "Plumbing"


@dataclass(frozen=True)
class PrimitiveSpec:
    name: str
    arg_types: tuple[DslType, ...]
    ret_type: DslType
    category: Category
    impl: Optional[Callable] = None  # None for special forms
    special: str | None = None  # "identity" | "this_object" | "compose" | "branch" | "map_objects"
    searchable: bool = True
    code_length: float = field(default=0.0, compare=False)  # set when catalog is frozen

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    def signature_text(self) -> str:
        args = ", ".join(t.value for t in self.arg_types)
        return f"({args}) -> {self.ret_type.value}"


_REGISTRY: dict[str, PrimitiveSpec] = {}
_FROZEN: list[PrimitiveSpec] | None = None


def register(spec: PrimitiveSpec) -> PrimitiveSpec:
    if _FROZEN is not None:
        raise RuntimeError("catalog already frozen")
    if spec.name in _REGISTRY:
        raise ValueError(f"duplicate primitive {spec.name}")
    _REGISTRY[spec.name] = spec
    return spec


def _freeze() -> list[PrimitiveSpec]:
    global _FROZEN
    if _FROZEN is None:
        from . import ops  # noqa: F401  (registration side effects)

        uniform = math.log2(len(_REGISTRY))
        frozen = []
        for name in sorted(_REGISTRY):
            s = _REGISTRY[name]
            frozen.append(
                PrimitiveSpec(
                    name=s.name,
                    arg_types=s.arg_types,
                    ret_type=s.ret_type,
                    category=s.category,
                    impl=s.impl,
                    special=s.special,
                    searchable=s.searchable,
                    code_length=uniform,
                )
            )
        _FROZEN = frozen
    return _FROZEN


def catalog() -> list[PrimitiveSpec]:
    """The fixed primitive catalog, sorted by name."""
    return list(_freeze())


def primitive(name: str) -> PrimitiveSpec:
    _freeze()
    for s in _FROZEN:  # type: ignore[union-attr]
        if s.name == name:
            return s
    raise KeyError(f"unknown primitive {name!r}")


def _primitive_map() -> dict[str, PrimitiveSpec]:
    return {s.name: s for s in _freeze()}


def uniform_code_length() -> float:
    return math.log2(len(_freeze()))


def catalog_manifest() -> str:
    """One line per primitive: name, signature, category, code length."""
    lines = [
        f"{s.name}\t{s.signature_text()}\t{s.category.value}\t{s.code_length:.6f}"
        for s in _freeze()
    ]
    return "\n".join(lines) + "\n"


def catalog_version() -> str:
    digest = hashlib.sha256(catalog_manifest().encode()).hexdigest()[:10]
    return f"ck-{len(_freeze())}-{digest}"


# ---------------------------------------------------------------------------
# Structure helpers


def node_count(expr: Expr) -> int:
    """Number of primitive applications; literals are not nodes."""
    if isinstance(expr, Literal):
        return 0
    return 1 + sum(node_count(a) for a in expr.args)


def iter_applies(expr: Expr):
    if isinstance(expr, Apply):
        yield expr
        for a in expr.args:
            yield from iter_applies(a)


def subtrees(expr: Expr) -> set[Expr]:
    """All Apply subtrees (including the root), as a set."""
    return set(iter_applies(expr))


def description_length(p: Program, coding: dict[str, float] | None = None) -> float:
    """Total bits: per-node primitive cost plus literal costs.

    ``coding`` overrides per-primitive costs (frequency-weighted coding);
    the default is uniform log2(catalog size) per node.
    """
    prims = _primitive_map()
    total = 0.0
    stack: list[Expr] = [p]
    while stack:
        e = stack.pop()
        if isinstance(e, Literal):
            total += e.bits()
        else:
            spec = prims[e.name]
            total += coding.get(e.name, spec.code_length) if coding else spec.code_length
            stack.extend(e.args)
    return total


# ---------------------------------------------------------------------------
# Type checking


@dataclass
class TypeCheckResult:
    ok: bool
    diagnostic: str | None = None

    def __bool__(self) -> bool:
        return self.ok


DEFAULT_MAX_NODES = 24


def type_check(p: Expr, max_nodes: int = DEFAULT_MAX_NODES) -> TypeCheckResult:
    """Well-typedness: signatures match, root is grid-typed, size bounded.

    Never raises; returns a result naming the first offending node.
    """
    prims = _primitive_map()

    def check(e: Expr, path: str, object_ctx: bool) -> str | None:
        if isinstance(e, Literal):
            return None if e.in_range() else f"{path}: literal {e.value!r} out of range"
        spec = prims.get(e.name)
        if spec is None:
            return f"{path}: unknown primitive {e.name!r}"
        if len(e.args) != spec.arity:
            return f"{path}: {e.name} expects {spec.arity} args, got {len(e.args)}"
        if spec.special == "this_object" and not object_ctx:
            return f"{path}: this_object outside a map_objects body"
        for i, (arg, want) in enumerate(zip(e.args, spec.arg_types)):
            sub = f"{path}.{i}"
            if isinstance(arg, Literal):
                if arg.kind is not want:
                    return f"{sub}: literal kind {arg.kind.value}, expected {want.value}"
                if not arg.in_range():
                    return f"{sub}: literal {arg.value!r} out of range"
            else:
                got = prims.get(arg.name)
                if got is None:
                    return f"{sub}: unknown primitive {arg.name!r}"
                if got.ret_type is not want:
                    return f"{sub}: {arg.name} returns {got.ret_type.value}, expected {want.value}"
                inner_ctx = object_ctx or (spec.special == "map_objects" and i == 1)
                err = check(arg, sub, inner_ctx)
                if err:
                    return err
        return None

    if isinstance(p, Literal):
        return TypeCheckResult(False, "root: a bare literal is not a program")
    n = node_count(p)
    if n > max_nodes:
        return TypeCheckResult(False, f"root: {n} nodes exceeds maximum {max_nodes}")
    root_spec = prims.get(p.name)
    if root_spec is not None and root_spec.ret_type is not DslType.GRID:
        return TypeCheckResult(
            False, f"root: program must return {DslType.GRID.value}, got {root_spec.ret_type.value}"
        )
    err = check(p, "root", False)
    return TypeCheckResult(err is None, err)


# ---------------------------------------------------------------------------
# Canonical text form (prefix s-expressions)


def serialize_program(p: Expr) -> str:
    """Canonical prefix form; nullary applications print bare."""
    if isinstance(p, Literal):
        if p.kind is DslType.DIRECTION:
            return p.value.name.lower()
        if p.kind is DslType.COORD:
            return f"(coord {p.value[0]} {p.value[1]})"
        return str(p.value)
    if not p.args:
        return p.name
    return "(" + " ".join([p.name] + [serialize_program(a) for a in p.args]) + ")"


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_program(text: str) -> Program:
    """Parse canonical text back into an AST. Raises ParseError."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty program text")
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        return tok

    prims = _primitive_map()

    def parse_expr(expected: DslType) -> Expr:
        tok = take()
        if tok == ")":
            raise ParseError("unexpected ')'")
        if tok == "(":
            head = take()
            if head == "coord":
                if expected is not DslType.COORD:
                    raise ParseError(f"coordinate literal in a {expected.value} slot")
                r, c = _int_token(take()), _int_token(take())
                if take() != ")":
                    raise ParseError("coord literal takes exactly two integers")
                return Literal(DslType.COORD, (r, c))
            spec = prims.get(head)
            if spec is None:
                raise ParseError(f"unknown primitive {head!r}")
            args = tuple(parse_expr(t) for t in spec.arg_types)
            if take() != ")":
                raise ParseError(f"too many arguments to {head}")
            return Apply(head, args)
        if tok.lstrip("-").isdigit():
            if expected not in (DslType.INT, DslType.COLOR):
                raise ParseError(f"integer literal in a {expected.value} slot")
            return Literal(expected, _int_token(tok))
        if tok in DIRECTION_NAMES:
            if expected is not DslType.DIRECTION:
                raise ParseError(f"direction literal in a {expected.value} slot")
            return Literal(DslType.DIRECTION, DIRECTION_NAMES[tok])
        spec = prims.get(tok)
        if spec is None:
            raise ParseError(f"unknown primitive {tok!r}")
        if spec.arity != 0:
            raise ParseError(f"{tok} takes arguments and must be parenthesized")
        return Apply(tok, ())

    def _int_token(tok: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}") from None

    root = parse_expr(DslType.GRID)
    if peek() is not None:
        raise ParseError(f"trailing tokens after program: {tokens[pos:]}")
    if isinstance(root, Literal):
        raise ParseError("a bare literal is not a program")
    return root
