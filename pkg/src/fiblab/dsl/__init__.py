"""The identity language: AST, parser, printer, substitution, umbral generator."""
from .ast import (
    Add,
    Binom,
    Condition,
    Const,
    Expr,
    Fib,
    GenFib,
    Identity,
    IndexVal,
    KFib,
    Lucas,
    Meta,
    Mul,
    Neg,
    Param,
    Pow,
    Sign,
    Sum,
    free_vars,
    has_sum,
    walk,
)
from .lin import LinForm
from .parser import DSLError, DSLSyntaxError, ShadowingError, UnboundVariableError, parse, parse_expr, parse_lin
from .printer import render, render_expr
from .transform import (
    SubstitutionError,
    binomial,
    canonicalize,
    canonicalize_identity,
    param_grid,
    parse_grid,
    substitute,
    substitute_expr,
)
from .umbral import expand_umbral

__all__ = [
    "Add",
    "Binom",
    "Condition",
    "Const",
    "Expr",
    "Fib",
    "GenFib",
    "Identity",
    "IndexVal",
    "KFib",
    "Lucas",
    "Meta",
    "Mul",
    "Neg",
    "Param",
    "Pow",
    "Sign",
    "Sum",
    "LinForm",
    "DSLError",
    "DSLSyntaxError",
    "ShadowingError",
    "UnboundVariableError",
    "SubstitutionError",
    "parse",
    "parse_expr",
    "parse_lin",
    "render",
    "render_expr",
    "canonicalize",
    "canonicalize_identity",
    "substitute",
    "substitute_expr",
    "param_grid",
    "parse_grid",
    "binomial",
    "expand_umbral",
    "free_vars",
    "has_sum",
    "walk",
]
