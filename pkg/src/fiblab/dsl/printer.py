"""Canonical text for expressions and identities.

``parse(render(x))`` canonicalizes back to ``canonicalize(x)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

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
    Mul,
    Neg,
    Param,
    Pow,
    Sign,
    Sum,
)
from .lin import LinForm
from .transform import canonicalize

__all__ = ["render", "render_expr", "render_condition"]

_ADD, _MUL, _POW, _ATOM = 1, 2, 3, 4


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _exp(lf: LinForm) -> str:
    s = str(lf)
    if lf.is_const or (len(lf.terms) == 1 and lf.const == 0 and lf.terms[0][1] == 1 and len(lf.terms[0][0]) == 1):
        return s
    return f"({s})"


def _prec(e: Expr) -> int:
    if isinstance(e, Add):
        return _ADD
    if isinstance(e, (Mul, Neg)):
        return _MUL
    if isinstance(e, Const):
        return _ATOM if e.value >= 0 and e.value.denominator == 1 else _MUL
    if isinstance(e, Pow):
        return _POW
    if isinstance(e, IndexVal):
        return _ATOM if len(e.form.terms) == 1 and e.form.const == 0 and e.form.terms[0][1] == 1 else _ADD
    return _ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    s = _r(e)
    return f"({s})" if _prec(e) < min_prec else s


def _term(e: Expr) -> tuple[bool, str]:
    """(negative?, text of the absolute value) for an additive term."""
    if isinstance(e, Const) and e.value < 0:
        return True, _frac(-e.value)
    if isinstance(e, Neg):
        return True, _wrap(e.arg, _MUL)
    if isinstance(e, Mul) and isinstance(e.factors[0], Const) and e.factors[0].value < 0:
        c = -e.factors[0].value
        rest = e.factors[1:]
        if c == 1:
            inner = rest[0] if len(rest) == 1 else Mul(rest)
        else:
            inner = Mul((Const(c),) + rest)
        return True, _wrap(inner, _MUL)
    return False, _r(e)


def _r(e: Expr) -> str:
    if isinstance(e, Fib):
        return f"F[{e.index}]"
    if isinstance(e, Lucas):
        return f"L[{e.index}]"
    if isinstance(e, KFib):
        return f"Fk{{{e.k}}}[{e.index}]"
    if isinstance(e, GenFib):
        return f"H{{{e.h0},{e.h1}}}[{e.index}]"
    if isinstance(e, Sign):
        return f"(-1)^{_exp(e.exponent)}"
    if isinstance(e, Binom):
        return f"C({e.upper},{e.lower})"
    if isinstance(e, Const):
        return ("-" + _frac(-e.value)) if e.value < 0 else _frac(e.value)
    if isinstance(e, IndexVal):
        return str(e.form)
    if isinstance(e, Sum):
        return f"Sum({e.var}, {e.lower}, {e.upper}, {_r(e.body)})"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _ATOM)}^{_exp(e.exp)}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _MUL)
    if isinstance(e, Mul):
        f0 = e.factors[0]
        if isinstance(f0, Const) and f0.value == -1 and len(e.factors) > 1:
            rest = e.factors[1:]
            return "-" + _wrap(rest[0] if len(rest) == 1 else Mul(rest), _MUL)
        parts = []
        for i, f in enumerate(e.factors):
            if i == 0 and isinstance(f, Const):
                parts.append(_r(f))
            else:
                parts.append(_wrap(f, _POW))
        return "*".join(parts)
    if isinstance(e, Add):
        out = []
        for i, t in enumerate(e.terms):
            neg, body = _term(t)
            if i == 0:
                out.append(("-" + body) if neg else body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)
    raise TypeError(f"cannot render {type(e).__name__}")


def render_expr(e: Expr) -> str:
    return _r(canonicalize(e))


def render_condition(c: Union[Condition, Param]) -> str:
    if isinstance(c, Param):
        return f"{c.name} in {c.lo}..{c.hi}"
    if len(c.bounds) == 1:
        return f"{c.var} >= {c.bounds[0]}"
    return f"{c.var} >= max({', '.join(str(b) for b in c.bounds)})"


def render(x: Union[Identity, Expr]) -> str:
    """Canonical source text; identities include their ``;`` clause."""
    if isinstance(x, Expr):
        return render_expr(x)
    body = " = ".join(render_expr(s) for s in x.sides)
    clauses = [render_condition(c) for c in x.conditions] + [render_condition(p) for p in x.params]
    return f"{body} ; {', '.join(clauses)}" if clauses else body
