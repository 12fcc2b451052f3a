"""Exact evaluation and falsification sweeps.

:func:`eval_expr` is a direct recursive interpreter. :func:`check_identity`
lowers each side to a small tuple IR over precomputed sequence tables and
hands the sweep to the kernel layer (compiled when available).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from . import kernels
from .dsl.ast import (
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
    Pow,
    Sign,
    Sum,
)
from .dsl.lin import LinForm
from .dsl.transform import binomial, param_grid, substitute, substitute_expr
from .sequences import recurrence

__all__ = [
    "EvaluationError",
    "CheckReport",
    "eval_expr",
    "seq_value",
    "check_identity",
    "default_ranges",
    "ALL_EQUAL",
    "COUNTEREXAMPLE",
]

ALL_EQUAL = "AllEqual"
COUNTEREXAMPLE = "CounterexampleAt"

DEFAULT_PER_INDEX = 300
DEFAULT_CAP = 10**6


class EvaluationError(ValueError):
    pass


def _seq_key(e: Expr, env: Mapping[str, int]) -> tuple[int, int, int]:
    if isinstance(e, Fib):
        return (1, 0, 1)
    if isinstance(e, Lucas):
        return (1, 2, 1)
    if isinstance(e, GenFib):
        return (1, e.h0, e.h1)
    if isinstance(e, KFib):
        k = _lin(e.k, env)
        if k < 1:
            raise EvaluationError(f"k-Fibonacci parameter must be >= 1, got {k}")
        return (k, 0, 1)
    raise TypeError(type(e).__name__)


def seq_value(e: Expr, env: Mapping[str, int]) -> int:
    """Value of a sequence atom. All recurrences extend to negative indices."""
    return recurrence(*_seq_key(e, env))[_lin(e.index, env)]


def _lin(lf: LinForm, env: Mapping[str, int]) -> int:
    try:
        return lf.evaluate(env)
    except KeyError as exc:
        raise EvaluationError(f"unbound variable {exc.args[0]!r}") from None


def eval_expr(e: Expr, env: Mapping[str, int]) -> Fraction:
    """Exact value of ``e`` with index variables bound by ``env``."""
    if isinstance(e, (Fib, Lucas, KFib, GenFib)):
        return Fraction(seq_value(e, env))
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Sign):
        return Fraction(-1 if _lin(e.exponent, env) % 2 else 1)
    if isinstance(e, Binom):
        return Fraction(binomial(_lin(e.upper, env), _lin(e.lower, env)))
    if isinstance(e, IndexVal):
        return Fraction(_lin(e.form, env))
    if isinstance(e, Neg):
        return -eval_expr(e.arg, env)
    if isinstance(e, Add):
        return sum((eval_expr(t, env) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        acc = Fraction(1)
        for f in e.factors:
            acc *= eval_expr(f, env)
        return acc
    if isinstance(e, Pow):
        return eval_expr(e.base, env) ** _lin(e.exp, env)
    if isinstance(e, Sum):
        lo, hi = _lin(e.lower, env), _lin(e.upper, env)
        inner = dict(env)
        acc = Fraction(0)
        for v in range(lo, hi + 1):
            inner[e.var] = v
            acc += eval_expr(e.body, inner)
        return acc
    raise TypeError(f"cannot evaluate {type(e).__name__}")


# -- reports ----------------------------------------------------------------


@dataclass
class CheckReport:
    id: str
    ranges: dict[str, tuple[int, int]]
    status: str = ALL_EQUAL
    assignment: Optional[dict[str, int]] = None
    left: Optional[Fraction] = None
    right: Optional[Fraction] = None
    pair: Optional[int] = None
    elapsed: float = 0.0
    count: int = 0
    instances: int = 1
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == ALL_EQUAL

    def tested(self, var: str) -> list[int]:
        lo, hi = self.ranges[var]
        return list(range(lo, hi + 1))

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "status": self.status,
            "ranges": {k: [lo, hi] for k, (lo, hi) in self.ranges.items()},
            "assignments": self.count,
            "instances": self.instances,
            "elapsed": round(self.elapsed, 6),
        }
        if not self.ok:
            d["assignment"] = self.assignment
            d["pair"] = self.pair
            d["left"] = str(self.left)
            d["right"] = str(self.right)
        return d


# -- lowering to the kernel IR ----------------------------------------------

_CONST, _SEQ, _SIGN, _BINOM, _POW, _ADD, _MUL, _SUM, _IDX = range(9)

Interval = tuple[int, int]


def _interval(lf: LinForm, box: Mapping[str, Interval]) -> Interval:
    lo = hi = lf.const
    for m, c in lf.terms:
        if len(m) != 1:
            raise EvaluationError(f"index form {lf} is not linear in the free indices")
        a, b = box[m[0]]
        lo += min(c * a, c * b)
        hi += max(c * a, c * b)
    return lo, hi


class _Lowering:
    def __init__(self, slots: dict[str, int], box: dict[str, Interval]):
        self.slots = dict(slots)
        self.box = dict(box)
        self.needs: dict[tuple[int, int, int], Interval] = {}
        self.tables: dict[tuple[int, int, int], tuple[list, int]] = {}

    def coeffs(self, lf: LinForm) -> tuple[tuple[tuple[int, int], ...], int]:
        out = []
        for m, c in lf.terms:
            if len(m) != 1 or m[0] not in self.slots:
                raise EvaluationError(f"index form {lf} uses unbound or non-linear terms")
            out.append((self.slots[m[0]], c))
        return tuple(out), lf.const

    # first pass: collect index intervals per sequence
    def scan(self, e: Expr, box: dict[str, Interval]) -> None:
        if isinstance(e, (Fib, Lucas, KFib, GenFib)):
            key = _seq_key(e, {})
            lo, hi = _interval(e.index, box)
            old = self.needs.get(key)
            self.needs[key] = (lo, hi) if old is None else (min(old[0], lo), max(old[1], hi))
            return
        if isinstance(e, Sum):
            lo = _interval(e.lower, box)[0]
            hi = _interval(e.upper, box)[1]
            inner = dict(box)
            inner[e.var] = (lo, max(lo, hi))
            self.scan(e.body, inner)
            return
        for c in _kids(e):
            self.scan(c, box)

    def build_tables(self) -> None:
        for key, (lo, hi) in self.needs.items():
            self.tables[key] = (recurrence(*key).table(lo, hi), -lo)

    def lower(self, e: Expr):
        if isinstance(e, (Fib, Lucas, KFib, GenFib)):
            table, base = self.tables[_seq_key(e, {})]
            co, k = self.coeffs(e.index)
            return (_SEQ, table, base, co, k)
        if isinstance(e, Const):
            v = e.value
            return (_CONST, v.numerator if v.denominator == 1 else v)
        if isinstance(e, Sign):
            return (_SIGN, *self.coeffs(e.exponent))
        if isinstance(e, Binom):
            return (_BINOM, *self.coeffs(e.upper), *self.coeffs(e.lower))
        if isinstance(e, IndexVal):
            return (_IDX, *self.coeffs(e.form))
        if isinstance(e, Neg):
            return (_MUL, ((_CONST, -1), self.lower(e.arg)))
        if isinstance(e, Add):
            return (_ADD, tuple(self.lower(t) for t in e.terms))
        if isinstance(e, Mul):
            return (_MUL, tuple(self.lower(f) for f in e.factors))
        if isinstance(e, Pow):
            return (_POW, self.lower(e.base), *self.coeffs(e.exp))
        if isinstance(e, Sum):
            lo = self.coeffs(e.lower)
            hi = self.coeffs(e.upper)
            if e.var not in self.slots:
                self.slots[e.var] = len(self.slots)
            return (_SUM, self.slots[e.var], *lo, *hi, self.lower(e.body))
        raise TypeError(f"cannot lower {type(e).__name__}")


def _kids(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, (Pow,)):
        return (e.base,)
    if isinstance(e, Neg):
        return (e.arg,)
    if isinstance(e, Sum):
        return (e.body,)
    return ()


# -- sweeps -----------------------------------------------------------------


def default_ranges(
    ident: Identity, per_index: int = DEFAULT_PER_INDEX, cap: int = DEFAULT_CAP
) -> dict[str, tuple[int, int]]:
    """``per_index`` consecutive values from each condition bound, shrunk so
    that the Cartesian product stays within ``cap``."""
    idx = ident.indices
    if not idx:
        return {}
    per = per_index
    while per > 1 and per ** len(idx) > cap:
        per -= 1
    out = {}
    for v in idx:
        c = ident.condition_for(v)
        lo = _static_lower(c) if c else 0
        out[v] = (lo, lo + per - 1)
    return out


def _static_lower(c: Condition) -> int:
    """Lower bound of ``c`` if it does not depend on other indices, else 0
    (dependent bounds are handled by shifting, see :func:`_shift_dependent`)."""
    if all(b.is_const for b in c.bounds):
        return max(b.const for b in c.bounds)
    return 0


def _shift_dependent(ident: Identity) -> tuple[Identity, dict[str, LinForm]]:
    """Rewrite ``v >= form(other indices)`` as ``v' >= 0`` with ``v = v' + form``.

    Shifts compose in condition order, so a chain ``n >= k, s >= n`` becomes
    ``n = n' + k`` and ``s = s' + n' + k``. The returned map sends each
    original index to its form over the shifted ones.
    """
    full: dict[str, LinForm] = {}
    conds = []
    shifted = False
    for c in ident.conditions:
        if all(b.is_const for b in c.bounds):
            conds.append(c)
            full[c.var] = LinForm.var(c.var)
            continue
        if len(c.bounds) != 1:
            raise EvaluationError(f"condition on {c.var} mixes several index-dependent bounds")
        full[c.var] = LinForm.var(c.var) + c.bounds[0].subs(full)
        conds.append(Condition(c.var, (LinForm(),)))
        shifted = True
    if not shifted:
        return ident, {}
    sides = tuple(substitute_expr(s, full) for s in ident.sides)
    return Identity(sides, tuple(conds), ident.params, ident.meta), full


def _sweep_instance(ident: Identity, ranges: Mapping[str, tuple[int, int]]):
    shifted, shifts = _shift_dependent(ident)
    idx = shifted.indices
    slots = {v: i for i, v in enumerate(idx)}
    box: dict[str, Interval] = {}
    for v in idx:
        if v not in ranges:
            raise EvaluationError(f"no sweep range for index {v!r}")
        box[v] = ranges[v]
    low = _Lowering(slots, box)
    for s in shifted.sides:
        low.scan(s, box)
    low.build_tables()
    pairs = [(i, low.lower(l), low.lower(r)) for i, l, r in shifted.pairs()]
    count, hit = kernels.sweep(pairs, [box[v] for v in idx], len(low.slots))
    if hit is None:
        return count, None
    env, pair, a, b = hit
    primed = dict(zip(idx, env))
    assignment = dict(primed)
    for v, form in shifts.items():
        assignment[v] = form.evaluate(primed)
    return count, (assignment, pair, Fraction(a), Fraction(b))


def check_identity(
    ident: Identity,
    sweep: Union[None, int, Mapping[str, Union[range, tuple[int, int]]]] = None,
    grid: Optional[Mapping[str, range]] = None,
) -> CheckReport:
    """Exact falsification sweep.

    ``sweep`` is either a per-index count (from each condition bound) or an
    explicit mapping of index to range. Families are swept over every grid
    instance; the first counterexample in grid order is reported.
    """
    t0 = time.perf_counter()
    if isinstance(sweep, int):
        ranges = default_ranges(ident, per_index=sweep)
    elif sweep is None:
        ranges = default_ranges(ident)
    else:
        ranges = {}
        for k, r in sweep.items():
            ranges[k] = (r.start, r.stop - 1) if isinstance(r, range) else (int(r[0]), int(r[1]))
        for k, v in default_ranges(ident).items():
            ranges.setdefault(k, v)
    report = CheckReport(ident.label, ranges)
    if ident.params:
        instances = list(param_grid(ident.params, grid))
    else:
        instances = [{}]
    total = 0
    for binding in instances:
        inst = substitute(ident, binding, check_ranges=grid is None) if binding else ident
        count, hit = _sweep_instance(inst, ranges)
        total += count
        if hit is not None:
            assignment, pair, a, b = hit
            report.status = COUNTEREXAMPLE
            report.assignment = {**binding, **assignment}
            report.pair, report.left, report.right = pair, a, b
            break
    report.count = total
    report.instances = len(instances)
    report.elapsed = time.perf_counter() - t0
    return report
