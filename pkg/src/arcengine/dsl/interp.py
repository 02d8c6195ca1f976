"""Resource-bounded evaluator for catalog expressions.

Evaluation is pure and total under budget: the only outcomes are a Grid,
EvalError, or BudgetExceeded. Unexpected exceptions raised inside a
primitive are converted to EvalError at the application boundary -- the
search must survive arbitrary ill-behaved candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import BudgetExceeded, EvalError
from ..grid import Grid, GridObject
from .lang import Apply, DslType, Expr, Literal, Program, _primitive_map, type_check


@dataclass(frozen=True)
class EvalBudget:
    max_nodes_evaluated: int = 10_000
    max_cells_touched: int = 1_000_000

    def __post_init__(self):
        if self.max_nodes_evaluated <= 0 or self.max_cells_touched <= 0:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = EvalBudget()


class _Counters:
    __slots__ = ("nodes", "cells", "budget")

    def __init__(self, budget: EvalBudget):
        self.nodes = 0
        self.cells = 0
        self.budget = budget

    def charge(self, value) -> None:
        self.nodes += 1
        self.cells += _value_cells(value)
        if self.nodes > self.budget.max_nodes_evaluated:
            raise BudgetExceeded(f"evaluated {self.nodes} nodes")
        if self.cells > self.budget.max_cells_touched:
            raise BudgetExceeded(f"touched {self.cells} cells")


def _value_cells(value) -> int:
    if isinstance(value, Grid):
        return value.height * value.width
    if isinstance(value, GridObject):
        return value.size
    if isinstance(value, tuple):
        return sum(_value_cells(v) for v in value) or 1
    return 1


def eval_program(
    p: Program, input_grid: Grid, budget: EvalBudget = DEFAULT_BUDGET, validate: bool = True
) -> Grid:
    """Evaluate a whole program on an input grid.

    The program must type check (skip with ``validate=False`` for programs
    checked at construction); the result always satisfies the grid
    invariants or an EvalError / BudgetExceeded is raised.
    """
    if validate:
        tc = type_check(p)
        if not tc:
            raise EvalError(f"ill-typed program: {tc.diagnostic}")
    counters = _Counters(budget)
    result = _eval(p, input_grid, None, counters)
    if not isinstance(result, Grid):
        raise EvalError(f"program returned {type(result).__name__}, not a grid")
    return result


def eval_expr(e: Expr, input_grid: Grid, budget: EvalBudget = DEFAULT_BUDGET):
    """Evaluate an arbitrary typed expression (any result type)."""
    counters = _Counters(budget)
    return _eval(e, input_grid, None, counters)


def _eval(e: Expr, focus: Grid, obj: GridObject | None, counters: _Counters):
    if isinstance(e, Literal):
        return e.value
    spec = _primitive_map()[e.name]
    if spec.special == "identity":
        counters.charge(focus)
        return focus
    if spec.special == "this_object":
        if obj is None:
            raise EvalError("this_object outside a map_objects body")
        counters.charge(obj)
        return obj
    if spec.special == "compose":
        first = _eval(e.args[0], focus, obj, counters)
        if not isinstance(first, Grid):
            raise EvalError("compose: first stage did not produce a grid")
        result = _eval(e.args[1], first, obj, counters)
        counters.charge(result)
        return result
    if spec.special == "branch":
        cond = _eval(e.args[0], focus, obj, counters)
        result = _eval(e.args[1 if cond else 2], focus, obj, counters)
        counters.charge(result)
        return result
    if spec.special == "map_objects":
        objs = _eval(e.args[0], focus, obj, counters)
        if not isinstance(objs, tuple):
            raise EvalError("map_objects: first argument is not an object list")
        mapped = tuple(_eval(e.args[1], focus, o, counters) for o in objs)
        if not all(isinstance(m, GridObject) for m in mapped):
            raise EvalError("map_objects: body did not produce an object")
        counters.charge(mapped)
        return mapped

    values = [_eval(a, focus, obj, counters) for a in e.args]
    result = apply_primitive(spec, values)
    counters.charge(result)
    return result


def apply_primitive(spec, values):
    """Call one strict primitive, converting stray faults to EvalError."""
    try:
        return spec.impl(*values)
    except (EvalError, BudgetExceeded):
        raise
    except (ArithmeticError, LookupError, ValueError, TypeError, AttributeError) as e:
        raise EvalError(f"{spec.name}: {type(e).__name__}: {e}") from e


def outcome(p: Program, input_grid: Grid, budget: EvalBudget = DEFAULT_BUDGET):
    """Evaluate and classify: ("grid", Grid) | ("eval_error", e) | ("budget", e)."""
    try:
        return "grid", eval_program(p, input_grid, budget)
    except BudgetExceeded as e:
        return "budget", e
    except EvalError as e:
        return "eval_error", e
