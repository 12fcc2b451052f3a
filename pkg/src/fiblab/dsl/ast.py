"""Expression and identity trees.

Nodes are frozen dataclasses, so structural equality and hashing come for free.
Source positions ride along for error messages but never take part in equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .lin import LinForm

Pos = Optional[tuple[int, int]]


def _pos():
    return field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Expr:
    pos: Pos = _pos()


@dataclass(frozen=True)
class Fib(Expr):
    index: LinForm


@dataclass(frozen=True)
class Lucas(Expr):
    index: LinForm


@dataclass(frozen=True)
class KFib(Expr):
    k: LinForm
    index: LinForm


@dataclass(frozen=True)
class GenFib(Expr):
    h0: int
    h1: int
    index: LinForm


@dataclass(frozen=True)
class Sign(Expr):
    """``(-1)**exponent``."""

    exponent: LinForm


@dataclass(frozen=True)
class Binom(Expr):
    upper: LinForm
    lower: LinForm


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class IndexVal(Expr):
    """The integer value of an index form (only meaningful for parameters)."""

    form: LinForm


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: LinForm


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Sum(Expr):
    var: str
    lower: LinForm
    upper: LinForm
    body: Expr


SEQ_ATOMS = (Fib, Lucas, KFib, GenFib)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Add,)):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Neg):
        return (e.arg,)
    if isinstance(e, Sum):
        return (e.body,)
    return ()


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def index_forms(e: Expr) -> Iterator[LinForm]:
    """Every index form directly held by ``e`` (not its children)."""
    if isinstance(e, (Fib, Lucas, GenFib)):
        yield e.index
    elif isinstance(e, KFib):
        yield e.k
        yield e.index
    elif isinstance(e, Sign):
        yield e.exponent
    elif isinstance(e, Binom):
        yield e.upper
        yield e.lower
    elif isinstance(e, IndexVal):
        yield e.form
    elif isinstance(e, Pow):
        yield e.exp
    elif isinstance(e, Sum):
        yield e.lower
        yield e.upper


def free_vars(e: Expr) -> set[str]:
    """Variables not bound by an enclosing ``Sum``."""
    out: set[str] = set()

    def rec(node: Expr, bound: frozenset[str]) -> None:
        for lf in index_forms(node):
            out.update(lf.variables - bound)
        if isinstance(node, Sum):
            rec(node.body, bound | {node.var})
            return
        for c in children(node):
            rec(c, bound)

    rec(e, frozenset())
    return out


def has_sum(e: Expr) -> bool:
    return any(isinstance(n, Sum) for n in walk(e))


@dataclass(frozen=True)
class Condition:
    """``var >= max(bounds)``."""

    var: str
    bounds: tuple[LinForm, ...]

    def lower(self, env: Optional[dict[str, int]] = None) -> int:
        return max(b.evaluate(env or {}) for b in self.bounds)


@dataclass(frozen=True)
class Param:
    """Declared family parameter ranging over ``lo..hi`` (inclusive)."""

    name: str
    lo: LinForm
    hi: LinForm


@dataclass(frozen=True)
class Meta:
    id: str = ""
    year: Optional[int] = None
    authors: str = ""
    paper_tag: str = ""
    claimed_class: str = ""


@dataclass(frozen=True)
class Identity:
    sides: tuple[Expr, ...]
    conditions: tuple[Condition, ...] = ()
    params: tuple[Param, ...] = ()
    meta: Meta = field(default_factory=Meta, compare=False)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    @property
    def indices(self) -> tuple[str, ...]:
        """Free index variables, in condition order."""
        params = set(self.param_names)
        seen = [c.var for c in self.conditions if c.var not in params]
        extra = sorted(set().union(*(free_vars(s) for s in self.sides)) - set(seen) - params)
        return tuple(seen) + tuple(extra)

    def condition_for(self, var: str) -> Optional[Condition]:
        for c in self.conditions:
            if c.var == var:
                return c
        return None

    def pairs(self) -> list[tuple[int, Expr, Expr]]:
        return [(i, self.sides[i], self.sides[i + 1]) for i in range(len(self.sides) - 1)]

    @property
    def label(self) -> str:
        return self.meta.id or self.meta.paper_tag or "<identity>"
