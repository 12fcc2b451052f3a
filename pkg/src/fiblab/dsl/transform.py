"""Structural rewriting: canonical form, parameter substitution, grids."""
from __future__ import annotations

import dataclasses
from fractions import Fraction
from math import comb
from typing import Iterator, Mapping, Optional, Union

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
from .parser import DSLError

__all__ = [
    "canonicalize",
    "canonicalize_identity",
    "substitute",
    "substitute_expr",
    "param_grid",
    "parse_grid",
    "SubstitutionError",
]


class SubstitutionError(DSLError):
    pass


ONE = Const(Fraction(1))
ZERO = Const(Fraction(0))


def _split_power(e: Expr) -> tuple[Expr, LinForm]:
    if isinstance(e, Pow):
        return e.base, e.exp
    return e, LinForm((), 1)


def _canon_mul(factors: list[Expr]) -> Expr:
    coef = Fraction(1)
    flat: list[Expr] = []
    for f in factors:
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    order: list[Expr] = []
    powers: dict[Expr, LinForm] = {}
    for f in flat:
        if isinstance(f, Const):
            coef *= f.value
            continue
        base, exp = _split_power(f)
        if base in powers:
            powers[base] = powers[base] + exp
        else:
            powers[base] = exp
            order.append(base)
    if coef == 0:
        return ZERO
    out: list[Expr] = []
    for base in order:
        p = _canon_pow(base, powers[base])
        if isinstance(p, Const):
            coef *= p.value
        else:
            out.append(p)
    if not out:
        return Const(coef)
    if coef != 1:
        out.insert(0, Const(coef))
    if len(out) == 1:
        return out[0]
    return Mul(tuple(out))


def _canon_pow(base: Expr, exp: LinForm) -> Expr:
    if isinstance(base, Sign) and exp.is_const:
        return canonicalize(Sign(base.exponent * exp.const))
    if exp.is_const:
        if exp.const == 0:
            return ONE
        if exp.const == 1:
            return base
        if isinstance(base, Const) and exp.const > 0:
            return Const(base.value**exp.const)
    if isinstance(base, Pow):
        return _canon_pow(base.base, base.exp * exp)
    return Pow(base, exp)


def canonicalize(e: Expr) -> Expr:
    """Flatten sums/products, fold numeric factors into one leading
    coefficient and collect repeated factors into powers.

    Additive terms keep their order and are never combined, so the printed
    form stays close to the source.
    """
    if isinstance(e, Add):
        terms: list[Expr] = []
        for t in e.terms:
            c = canonicalize(t)
            if isinstance(c, Add):
                terms.extend(c.terms)
            elif not (isinstance(c, Const) and c.value == 0):
                terms.append(c)
        if not terms:
            return ZERO
        if len(terms) == 1:
            return terms[0]
        return Add(tuple(terms))
    if isinstance(e, Neg):
        return _canon_mul([Const(Fraction(-1)), canonicalize(e.arg)])
    if isinstance(e, Mul):
        return _canon_mul([canonicalize(f) for f in e.factors])
    if isinstance(e, Pow):
        return _canon_pow(canonicalize(e.base), e.exp)
    if isinstance(e, Sum):
        return Sum(e.var, e.lower, e.upper, canonicalize(e.body))
    if isinstance(e, IndexVal):
        return _canon_indexval(e.form)
    if isinstance(e, Sign) and e.exponent.is_const:
        return Const(Fraction(-1 if e.exponent.const % 2 else 1))
    return _strip_pos(e)


def _canon_indexval(form: LinForm) -> Expr:
    # one IndexVal per monomial, so that "3*k+1" and IndexVal(3k+1) agree
    if form.is_const:
        return Const(Fraction(form.const))
    terms: list[Expr] = []
    for mono, c in form.terms:
        atom = IndexVal(LinForm(((mono, 1),), 0))
        terms.append(atom if c == 1 else Mul((Const(Fraction(c)), atom)))
    if form.const:
        terms.append(Const(Fraction(form.const)))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def _strip_pos(e: Expr) -> Expr:
    if e.pos is None:
        return e
    return dataclasses.replace(e, pos=None)


def canonicalize_identity(ident: Identity) -> Identity:
    return Identity(tuple(canonicalize(s) for s in ident.sides), ident.conditions, ident.params, ident.meta)


# -- substitution ---------------------------------------------------------

Binding = Mapping[str, Union[int, LinForm]]


def _sub_lin(lf: LinForm, b: Binding) -> LinForm:
    return lf.subs(b)


def substitute_expr(e: Expr, b: Binding) -> Expr:
    """Replace variables by integers or index forms, unrolling any ``Sum``
    whose limits become constant."""
    if isinstance(e, Fib):
        return Fib(_sub_lin(e.index, b))
    if isinstance(e, Lucas):
        return Lucas(_sub_lin(e.index, b))
    if isinstance(e, KFib):
        return KFib(_sub_lin(e.k, b), _sub_lin(e.index, b))
    if isinstance(e, GenFib):
        return GenFib(e.h0, e.h1, _sub_lin(e.index, b))
    if isinstance(e, Sign):
        ex = _sub_lin(e.exponent, b)
        if ex.is_const:
            return Const(Fraction(-1 if ex.const % 2 else 1))
        return Sign(ex)
    if isinstance(e, Binom):
        up, lo = _sub_lin(e.upper, b), _sub_lin(e.lower, b)
        if up.is_const and lo.is_const:
            return Const(Fraction(binomial(up.const, lo.const)))
        return Binom(up, lo)
    if isinstance(e, IndexVal):
        f = _sub_lin(e.form, b)
        return Const(Fraction(f.const)) if f.is_const else IndexVal(f)
    if isinstance(e, Const):
        return e
    if isinstance(e, Pow):
        base = substitute_expr(e.base, b)
        ex = _sub_lin(e.exp, b)
        if ex.is_const and ex.const < 0:
            raise SubstitutionError(f"negative exponent {ex.const} after substitution")
        return _canon_pow(base, ex)
    if isinstance(e, Neg):
        return Neg(substitute_expr(e.arg, b))
    if isinstance(e, Add):
        return Add(tuple(substitute_expr(t, b) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(substitute_expr(f, b) for f in e.factors))
    if isinstance(e, Sum):
        inner = {k: v for k, v in b.items() if k != e.var}
        lo, hi = _sub_lin(e.lower, inner), _sub_lin(e.upper, inner)
        body = substitute_expr(e.body, inner)
        if lo.is_const and hi.is_const:
            if hi.const < lo.const:
                return ZERO
            return Add(tuple(substitute_expr(body, {e.var: v}) for v in range(lo.const, hi.const + 1)))
        return Sum(e.var, lo, hi, body)
    raise TypeError(f"unknown node {type(e).__name__}")


def binomial(n: int, k: int) -> int:
    """``C(n, k)``; zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def _check_ranges(params: tuple[Param, ...], bindings: Mapping[str, int]) -> None:
    env: dict[str, int] = {}
    for p in params:
        if p.name not in bindings:
            raise SubstitutionError(f"missing binding for parameter {p.name!r}")
        v = bindings[p.name]
        lo, hi = p.lo.evaluate(env), p.hi.evaluate(env)
        if not lo <= v <= hi:
            raise SubstitutionError(f"parameter {p.name}={v} outside declared range {lo}..{hi}")
        env[p.name] = v


def substitute(ident: Identity, bindings: Mapping[str, int], check_ranges: bool = True) -> Identity:
    """Bind every declared parameter; the result is parameter-free."""
    if check_ranges:
        _check_ranges(ident.params, bindings)
    else:
        missing = [p.name for p in ident.params if p.name not in bindings]
        if missing:
            raise SubstitutionError(f"missing binding for parameter(s) {', '.join(missing)}")
    names = set(ident.param_names)
    b = {k: int(v) for k, v in bindings.items() if k in names}
    sides = tuple(canonicalize(substitute_expr(s, b)) for s in ident.sides)
    conds = tuple(Condition(c.var, tuple(x.subs(b) for x in c.bounds)) for c in ident.conditions if c.var not in names)
    return Identity(sides, conds, (), ident.meta)


def param_grid(params: tuple[Param, ...], overrides: Optional[Mapping[str, range]] = None) -> Iterator[dict[str, int]]:
    """All bindings of the declared ranges, in lexicographic order."""
    overrides = overrides or {}

    def rec(i: int, env: dict[str, int]) -> Iterator[dict[str, int]]:
        if i == len(params):
            yield dict(env)
            return
        p = params[i]
        rng = overrides.get(p.name)
        if rng is None:
            rng = range(p.lo.evaluate(env), p.hi.evaluate(env) + 1)
        for v in rng:
            env[p.name] = v
            yield from rec(i + 1, env)
        env.pop(p.name, None)

    yield from rec(0, {})


def parse_grid(text: str) -> dict[str, range]:
    """``"k:1..3, m:0..4"`` -> ``{"k": range(1, 4), "m": range(0, 5)}``."""
    out: dict[str, range] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, rng = part.partition(":")
        lo, _, hi = rng.partition("..")
        try:
            out[name.strip()] = range(int(lo), int(hi) + 1)
        except ValueError:
            raise SubstitutionError(f"bad grid item {part!r}; expected name:lo..hi") from None
    return out
