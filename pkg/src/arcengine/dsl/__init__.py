"""Core-knowledge DSL: typed AST, primitive catalog, interpreter, coding."""

from .interp import DEFAULT_BUDGET, EvalBudget, eval_expr, eval_program, outcome
from .lang import (
    Apply,
    Category,
    Direction,
    DslType,
    Expr,
    Literal,
    PrimitiveSpec,
    Program,
    catalog,
    catalog_manifest,
    catalog_version,
    description_length,
    node_count,
    parse_program,
    primitive,
    serialize_program,
    subtrees,
    type_check,
    uniform_code_length,
)

__all__ = [
    "Apply",
    "Category",
    "DEFAULT_BUDGET",
    "Direction",
    "DslType",
    "EvalBudget",
    "Expr",
    "Literal",
    "PrimitiveSpec",
    "Program",
    "catalog",
    "catalog_manifest",
    "catalog_version",
    "description_length",
    "eval_expr",
    "eval_program",
    "node_count",
    "outcome",
    "parse_program",
    "primitive",
    "serialize_program",
    "subtrees",
    "type_check",
    "uniform_code_length",
]
