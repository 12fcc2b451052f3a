"""Binet substitution of sum-free expressions into Laurent normal form.

For a sequence with dominant root ``alpha`` and ``beta = -1/alpha`` every free
index ``i`` gets a variable ``t_i = alpha**i``. Fixing the parity ``sigma_i``
of each index turns ``beta**i`` into ``sigma_i * t_i**-1``, so every atom
becomes a Laurent polynomial and zero-testing is exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..dsl.ast import (
    Add,
    Binom,
    Const,
    Expr,
    Fib,
    GenFib,
    IndexVal,
    KFib,
    Lucas,
    Mul,
    Neg,
    Pow,
    Sign,
    Sum,
    walk,
)
from ..dsl.lin import LinForm
from ..dsl.transform import binomial
from ..sequences import recurrence
from .laurent import LaurentPoly
from .quadfield import QuadRat, squarefree_split

__all__ = ["UnsupportedError", "Field", "field_of", "binet_normalize"]


class UnsupportedError(ValueError):
    """The expression has no Laurent normal form (left to bounded checking)."""


class Field:
    """Roots of ``x^2 = k x + 1``: ``alpha = (k + s*sqrt(d))/2``."""

    def __init__(self, k: int = 1):
        if k < 1:
            raise UnsupportedError(f"k-Fibonacci parameter must be >= 1, got {k}")
        self.k = k
        s, d = squarefree_split(k * k + 4)
        self.d = d
        self.alpha = QuadRat(Fraction(k, 2), Fraction(s, 2), d)
        self.beta = QuadRat(Fraction(k, 2), Fraction(-s, 2), d)
        # 1 / (alpha - beta) = 1 / (s sqrt d) = sqrt(d) / (s d)
        self.inv_gap = QuadRat(0, Fraction(1, s * d), d)

    def q(self, a, b=0) -> QuadRat:
        return QuadRat(a, b, self.d)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.k == self.k

    def __hash__(self) -> int:
        return hash(self.k)

    def __repr__(self) -> str:
        return f"Field(k={self.k})"


def _atom_k(e: Expr) -> int | None:
    if isinstance(e, (Fib, Lucas, GenFib)):
        return 1
    if isinstance(e, KFib):
        if not e.k.is_const:
            raise UnsupportedError(f"symbolic k-Fibonacci parameter {e.k}")
        return e.k.const
    return None


def field_of(*exprs: Expr) -> Field:
    """The single field shared by every sequence atom with a non-constant index."""
    ks = set()
    for e in exprs:
        for node in walk(e):
            k = _atom_k(node)
            if k is not None and not node.index.is_const:
                ks.add(k)
    if len(ks) > 1:
        raise UnsupportedError(f"atoms from different recurrences (k in {sorted(ks)})")
    return Field(ks.pop() if ks else 1)


class _Normalizer:
    def __init__(self, field: Field, variables: Sequence[str], parity: Mapping[str, int]):
        self.f = field
        self.vars = tuple(variables)
        self.pos = {v: i for i, v in enumerate(self.vars)}
        self.parity = dict(parity)
        self.nv = len(self.vars)

    def const(self, value) -> LaurentPoly:
        return LaurentPoly.const(self.f.q(value), self.nv, self.f.d)

    def split(self, lf: LinForm) -> tuple[list[int], int]:
        exps = [0] * self.nv
        for m, c in lf.terms:
            if len(m) != 1 or m[0] not in self.pos:
                raise UnsupportedError(f"index form {lf} is not linear in the free indices")
            exps[self.pos[m[0]]] = c
        return exps, lf.const

    def sign_of(self, exps: Sequence[int], const: int) -> int:
        s = -1 if const & 1 else 1
        for v, a in zip(self.vars, exps):
            if a & 1:
                s *= self.parity[v]
        return s

    def powers(self, lf: LinForm) -> tuple[LaurentPoly, LaurentPoly]:
        """``alpha**lf`` and ``beta**lf`` under the current parity."""
        exps, c = self.split(lf)
        a = LaurentPoly.monomial(self.f.alpha**c, exps, self.f.d)
        sign = self.sign_of(exps, 0)
        b = LaurentPoly.monomial(self.f.beta**c * sign, [-x for x in exps], self.f.d)
        return a, b

    def fib(self, lf: LinForm) -> LaurentPoly:
        a, b = self.powers(lf)
        return (a - b) * self.f.inv_gap

    def norm(self, e: Expr) -> LaurentPoly:
        if isinstance(e, Const):
            return self.const(e.value)
        if isinstance(e, (Fib, Lucas, KFib, GenFib)):
            return self.atom(e)
        if isinstance(e, Sign):
            exps, c = self.split(e.exponent)
            return self.const(self.sign_of(exps, c))
        if isinstance(e, Binom):
            if not (e.upper.is_const and e.lower.is_const):
                raise UnsupportedError("binomial coefficient with a free index")
            return self.const(binomial(e.upper.const, e.lower.const))
        if isinstance(e, IndexVal):
            if not e.form.is_const:
                raise UnsupportedError("index value depending on a free index")
            return self.const(e.form.const)
        if isinstance(e, Neg):
            return -self.norm(e.arg)
        if isinstance(e, Add):
            acc = LaurentPoly(self.nv, {}, self.f.d)
            for t in e.terms:
                acc = acc + self.norm(t)
            return acc
        if isinstance(e, Mul):
            acc = self.const(1)
            for t in e.factors:
                acc = acc * self.norm(t)
                if acc.is_zero():
                    break
            return acc
        if isinstance(e, Pow):
            if not e.exp.is_const:
                raise UnsupportedError("power with an exponent depending on a free index")
            if e.exp.const < 0:
                raise UnsupportedError("negative power")
            return self.norm(e.base) ** e.exp.const
        if isinstance(e, Sum):
            raise UnsupportedError("unexpanded sum")
        raise UnsupportedError(f"cannot normalize {type(e).__name__}")

    def atom(self, e: Expr) -> LaurentPoly:
        if e.index.is_const:
            k = _atom_k(e)
            if isinstance(e, Lucas):
                key = (1, 2, 1)
            elif isinstance(e, GenFib):
                key = (1, e.h0, e.h1)
            else:
                key = (k, 0, 1)
            return self.const(recurrence(*key)[e.index.const])
        if isinstance(e, Lucas):
            if self.f.k != 1:
                raise UnsupportedError("Lucas atoms mixed with k-Fibonacci atoms")
            a, b = self.powers(e.index)
            return a + b
        if isinstance(e, GenFib):
            return self.fib(e.index - 1) * e.h0 + self.fib(e.index) * e.h1
        return self.fib(e.index)


def binet_normalize(
    e: Expr,
    parity: Mapping[str, int],
    variables: Sequence[str] | None = None,
    field: Field | None = None,
) -> LaurentPoly:
    """Laurent normal form of a sum-free, parameter-free expression.

    ``parity`` maps each free index to +1 (even) or -1 (odd); ``variables``
    fixes the slot order (defaults to ``sorted(parity)``).
    """
    variables = tuple(sorted(parity)) if variables is None else tuple(variables)
    missing = [v for v in variables if v not in parity]
    if missing:
        raise ValueError(f"no parity given for {missing}")
    return _Normalizer(field or field_of(e), variables, parity).norm(e)
