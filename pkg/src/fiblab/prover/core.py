"""Proof dispatch: closed forms, summation induction and bounded fallback."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..dsl.ast import (
    Add,
    Binom,
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
    free_vars,
    has_sum,
)
from ..dsl.lin import LinForm
from ..dsl.transform import binomial, param_grid, substitute, substitute_expr
from ..evaluator import check_identity, eval_expr
from ..sequences import recurrence
from .binet import Field, UnsupportedError, binet_normalize, field_of
from .laurent import LaurentPoly

__all__ = [
    "PROVEN",
    "VERIFIED",
    "FALSIFIED",
    "CLOSED",
    "SUM_INDUCTION",
    "BOUNDED",
    "BOUNDED_LIMIT",
    "ParityCase",
    "ProofOutcome",
    "prove_closed",
    "prove_sum",
    "prove",
    "worst",
    "relation_equivalent",
    "atom_poly",
    "Equivalence",
]

PROVEN = "Proven"
VERIFIED = "VerifiedUpTo"
FALSIFIED = "Falsified"

CLOSED = "ClosedBinet"
SUM_INDUCTION = "SumInduction"
BOUNDED = "BoundedOnly"

BOUNDED_LIMIT = 30
_SEARCH_SWEEP = 40
_RANK = {PROVEN: 0, VERIFIED: 1, FALSIFIED: 2}


@dataclass
class ParityCase:
    pair: int
    parity: dict[str, int]
    residual: LaurentPoly

    def to_dict(self) -> dict:
        return {"pair": self.pair, "parity": dict(self.parity), "residual_terms": len(self.residual)}


@dataclass
class ProofOutcome:
    id: str
    status: str
    method: str
    trace: list[ParityCase] = field(default_factory=list)
    counterexample: Optional[dict] = None
    verified: Optional[dict[str, tuple[int, int]]] = None
    binding: dict[str, int] = field(default_factory=dict)
    base_cases: list[int] = field(default_factory=list)
    note: str = ""
    elapsed: float = 0.0

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    def to_dict(self) -> dict:
        d: dict = {"id": self.id, "status": self.status, "method": self.method}
        if self.binding:
            d["binding"] = dict(self.binding)
        if self.trace:
            d["cases"] = [c.to_dict() for c in self.trace]
        if self.base_cases:
            d["base_cases"] = list(self.base_cases)
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        if self.verified is not None:
            d["verified"] = {k: [lo, hi] for k, (lo, hi) in self.verified.items()}
        if self.note:
            d["note"] = self.note
        d["elapsed"] = round(self.elapsed, 6)
        return d


def worst(outcomes: Sequence[ProofOutcome]) -> str:
    """Worst status of a list (Falsified beats VerifiedUpTo beats Proven)."""
    if not outcomes:
        return PROVEN
    return max((o.status for o in outcomes), key=_RANK.__getitem__)


def _side_vars(ident: Identity) -> tuple[str, ...]:
    used = set().union(*(free_vars(s) for s in ident.sides))
    return tuple(v for v in ident.indices if v in used)


def _parities(variables: Sequence[str]):
    for signs in itertools.product((1, -1), repeat=len(variables)):
        yield dict(zip(variables, signs))


def _residual_cases(pairs, variables: Sequence[str], fld: Field) -> list[ParityCase]:
    cases = []
    for i, left, right in pairs:
        for parity in _parities(variables):
            res = binet_normalize(left, parity, variables, fld) - binet_normalize(right, parity, variables, fld)
            cases.append(ParityCase(i, parity, res))
    return cases


def _counterexample(ident: Identity) -> Optional[dict]:
    report = check_identity(ident, sweep=_SEARCH_SWEEP)
    if report.ok:
        return None
    return {
        "assignment": report.assignment,
        "pair": report.pair,
        "left": str(report.left),
        "right": str(report.right),
    }


def prove_closed(ident: Identity) -> ProofOutcome:
    """Binet normal form of every adjacent pair under every parity assignment."""
    t0 = time.perf_counter()
    if ident.params:
        raise UnsupportedError("bind the family parameters before proving")
    if any(has_sum(s) for s in ident.sides):
        raise UnsupportedError("closed-form proof of an identity containing a sum")
    variables = _side_vars(ident)
    fld = field_of(*ident.sides)
    cases = _residual_cases(ident.pairs(), variables, fld)
    out = ProofOutcome(ident.label, PROVEN, CLOSED, cases)
    if any(not c.residual.is_zero() for c in cases):
        _refute(ident, out)
    out.elapsed = time.perf_counter() - t0
    return out


def _refute(ident: Identity, out: ProofOutcome) -> None:
    cex = _counterexample(ident)
    if cex is not None:
        out.status, out.counterexample = FALSIFIED, cex
    else:
        out.status = VERIFIED
        out.verified = check_identity(ident, sweep=_SEARCH_SWEEP).ranges
        out.note = "internal: nonzero residual but no counterexample in the sweep"


# -- summation identities ---------------------------------------------------


def _sum_step(s: Sum, n: str) -> tuple[Expr, int, int]:
    """``S(n) - S(n-1)`` as a sum-free expression, plus the limit slopes."""
    if has_sum(s.body):
        raise UnsupportedError("nested sums")
    if n in free_vars(s.body) - {s.var}:
        raise UnsupportedError("sum body depends on the free index")
    for lf in (s.lower, s.upper):
        if not lf.is_linear or not lf.variables <= {n}:
            raise UnsupportedError(f"sum limit {lf} is not an affine function of {n}")
    a, b = s.upper.coeff(n), s.lower.coeff(n)
    if a < 1 or b < 0 or b > a:
        raise UnsupportedError("sum limits must grow with the free index")
    terms: list[Expr] = []
    for j in range(a):
        terms.append(substitute_expr(s.body, {s.var: s.upper - j}))
    prev_lower = s.lower.subs({n: LinForm.var(n) - 1})
    for j in range(b):
        terms.append(Neg(substitute_expr(s.body, {s.var: prev_lower + j})))
    return (Add(tuple(terms)) if terms else Const(Fraction(0))), a, b


def _delta(e: Expr, n: str, sums: list[Sum]) -> Expr:
    if not has_sum(e):
        return Add((e, Neg(substitute_expr(e, {n: LinForm.var(n) - 1}))))
    if isinstance(e, Sum):
        sums.append(e)
        return _sum_step(e, n)[0]
    if isinstance(e, Add):
        return Add(tuple(_delta(t, n, sums) for t in e.terms))
    if isinstance(e, Neg):
        return Neg(_delta(e.arg, n, sums))
    if isinstance(e, Mul):
        with_sum = [f for f in e.factors if has_sum(f)]
        others = [f for f in e.factors if not has_sum(f)]
        if len(with_sum) != 1 or any(n in free_vars(f) for f in others):
            raise UnsupportedError("sum is not a linear term of its side")
        return Mul(tuple(others) + (_delta(with_sum[0], n, sums),))
    raise UnsupportedError(f"sum inside {type(e).__name__}")


def _regular_from(sums: list[Sum], n: str) -> int:
    """Least ``m`` such that telescoping ``S(m) - S(m-1)`` is valid for every sum."""
    start = None
    for s in sums:
        # need upper(m-1) - lower(m-1) >= -1; the gap is nondecreasing in m
        a, b = s.upper.coeff(n), s.lower.coeff(n)
        slope, gap0 = a - b, s.upper.const - s.lower.const
        if slope == 0:
            m = -(10**9) if gap0 >= -1 else None
            if m is None:
                raise UnsupportedError("sum that is empty for every index")
        else:
            # slope*(m-1) + gap0 >= -1
            m = 1 + (-1 - gap0 + slope - 1) // slope
        start = m if start is None else max(start, m)
    return start if start is not None else -(10**9)


def prove_sum(ident: Identity) -> ProofOutcome:
    """Difference step proven in closed form plus exact base cases."""
    t0 = time.perf_counter()
    if ident.params:
        raise UnsupportedError("bind the family parameters before proving")
    variables = _side_vars(ident)
    if len(variables) != 1:
        raise UnsupportedError("summation proof needs exactly one free index")
    n = variables[0]
    cond = ident.condition_for(n)
    if cond is not None and not all(b.is_const for b in cond.bounds):
        raise UnsupportedError("index-dependent condition")
    n0 = cond.lower() if cond is not None else 0
    sums: list[Sum] = []
    step_pairs = [(i, _delta(l, n, sums), _delta(r, n, sums)) for i, l, r in ident.pairs()]
    fld = field_of(*(e for _, l, r in step_pairs for e in (l, r)))
    cases = _residual_cases(step_pairs, (n,), fld)
    out = ProofOutcome(ident.label, PROVEN, SUM_INDUCTION, cases)
    last_base = max(n0, _regular_from(sums, n) - 1)
    out.base_cases = list(range(n0, last_base + 1))
    for m in out.base_cases:
        env = {n: m}
        for i, l, r in ident.pairs():
            a, b = eval_expr(l, env), eval_expr(r, env)
            if a != b:
                out.status = FALSIFIED
                out.counterexample = {"assignment": {n: m}, "pair": i, "left": str(a), "right": str(b)}
                break
        if out.status == FALSIFIED:
            break
    if out.status == PROVEN and any(not c.residual.is_zero() for c in cases):
        _refute(ident, out)
    out.elapsed = time.perf_counter() - t0
    return out


# -- bounded fallback and dispatch ------------------------------------------


def _bounded(ident: Identity, reason: str, limit: int = BOUNDED_LIMIT) -> ProofOutcome:
    t0 = time.perf_counter()
    ranges = {}
    for v in _side_vars(ident):
        c = ident.condition_for(v)
        lo = c.lower() if c is not None and all(b.is_const for b in c.bounds) else 0
        ranges[v] = (lo, max(lo, limit))
    report = check_identity(ident, sweep=ranges)
    out = ProofOutcome(ident.label, VERIFIED, BOUNDED, verified=report.ranges, note=reason)
    if not report.ok:
        out.status = FALSIFIED
        out.counterexample = {
            "assignment": report.assignment,
            "pair": report.pair,
            "left": str(report.left),
            "right": str(report.right),
        }
    out.elapsed = time.perf_counter() - t0
    return out


def _prove_instance(ident: Identity) -> ProofOutcome:
    try:
        if any(has_sum(s) for s in ident.sides):
            return prove_sum(ident)
        return prove_closed(ident)
    except UnsupportedError as exc:
        return _bounded(ident, str(exc))


def prove(ident: Identity, grid: Optional[Mapping[str, range]] = None) -> list[ProofOutcome]:
    """Prove a parameter-free identity, or every instance of a family.

    ``grid`` overrides declared parameter ranges. The result holds one outcome
    per instance, each carrying its parameter binding.
    """
    if not ident.params:
        return [_prove_instance(ident)]
    outcomes = []
    for binding in param_grid(ident.params, grid):
        inst = substitute(ident, binding, check_ranges=grid is None)
        out = _prove_instance(inst)
        out.binding = dict(binding)
        outcomes.append(out)
    return outcomes


# -- equivalence of relations -----------------------------------------------

Monomial = tuple
AtomPoly = dict


def _sign_key(lf: LinForm) -> Optional[LinForm]:
    """Exponent of ``(-1)^lf`` reduced mod 2, constant part dropped."""
    reduced = LinForm.from_dict({m: c % 2 for m, c in lf.terms})
    return None if reduced.is_const else reduced


def _seq_atom(e: Expr):
    if isinstance(e, Lucas):
        return ("L", e.index), (1, 2, 1)
    if isinstance(e, GenFib):
        if (e.h0, e.h1) == (0, 1):
            return ("F", e.index), (1, 0, 1)
        return ("H", e.h0, e.h1, e.index), (1, e.h0, e.h1)
    if isinstance(e, KFib):
        if not e.k.is_const:
            return ("K", e.k, e.index), None
        if e.k.const == 1:
            return ("F", e.index), (1, 0, 1)
        return ("K", e.k.const, e.index), (e.k.const, 0, 1)
    return ("F", e.index), (1, 0, 1)


def _poly_add(a: AtomPoly, b: AtomPoly, scale: Fraction = Fraction(1)) -> AtomPoly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _poly_mul(a: AtomPoly, b: AtomPoly) -> AtomPoly:
    out: AtomPoly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            exps = dict(ma)
            for atom, e in mb:
                exps[atom] = exps.get(atom, 0) + e
            m = tuple(sorted(exps.items(), key=repr))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _atom(key) -> AtomPoly:
    return {((key, 1),): Fraction(1)}


def _const(v) -> AtomPoly:
    v = Fraction(v)
    return {(): v} if v else {}


def atom_poly(e: Expr) -> AtomPoly:
    """Expand ``e`` into a polynomial over its sequence, sign and binomial atoms.

    Constant-index atoms are evaluated; ``Fk{1}`` and ``H{0,1}`` are read as ``F``.
    """
    if isinstance(e, Const):
        return _const(e.value)
    if isinstance(e, (Fib, Lucas, KFib, GenFib)):
        key, rec = _seq_atom(e)
        if e.index.is_const and rec is not None:
            return _const(recurrence(*rec)[e.index.const])
        return _atom(key)
    if isinstance(e, Sign):
        key = _sign_key(e.exponent)
        sign = -1 if e.exponent.const % 2 else 1
        if key is None:
            return _const(sign)
        return {m: c * sign for m, c in _atom(("S", key)).items()}
    if isinstance(e, Binom):
        if e.upper.is_const and e.lower.is_const:
            return _const(binomial(e.upper.const, e.lower.const))
        return _atom(("C", e.upper, e.lower))
    if isinstance(e, IndexVal):
        return _const(e.form.const) if e.form.is_const else _atom(("I", e.form))
    if isinstance(e, Neg):
        return {m: -c for m, c in atom_poly(e.arg).items()}
    if isinstance(e, Add):
        acc: AtomPoly = {}
        for t in e.terms:
            acc = _poly_add(acc, atom_poly(t))
        return acc
    if isinstance(e, Mul):
        acc = _const(1)
        for f in e.factors:
            acc = _poly_mul(acc, atom_poly(f))
        return acc
    if isinstance(e, Pow):
        if not e.exp.is_const or e.exp.const < 0:
            return _atom(("P", e))
        base = atom_poly(e.base)
        acc = _const(1)
        for _ in range(e.exp.const):
            acc = _poly_mul(acc, base)
        return acc
    if isinstance(e, Sum):
        return _atom(("Sum", e))
    raise TypeError(f"cannot expand {type(e).__name__}")


def _relation(ident: Identity) -> Expr:
    if len(ident.sides) != 2:
        raise ValueError("equivalence is defined for single equations")
    return Add((ident.sides[0], Neg(ident.sides[1])))


@dataclass
class Equivalence:
    equivalent: bool
    shift: int = 0
    scale: Fraction = Fraction(1)
    cases: list[ParityCase] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.equivalent


def relation_equivalent(a: Identity, b: Identity, max_shift: int = 4) -> Equivalence:
    """Is ``lhs_a - rhs_a`` a rational multiple of ``lhs_b - rhs_b`` after
    shifting b's free index by at most ``max_shift``?

    Both relations are expanded over their atoms and compared; a match is then
    confirmed by a zero Binet residual of the difference in every parity case.
    """
    ra, rb = _relation(a), _relation(b)
    va, vb = _side_vars(a), _side_vars(b)
    if set(va) != set(vb):
        return Equivalence(False)
    pa = atom_poly(ra)
    shifts = [0]
    if len(vb) == 1:
        shifts = sorted(range(-max_shift, max_shift + 1), key=lambda s: (abs(s), -s))
    for s in shifts:
        rbs = substitute_expr(rb, {vb[0]: LinForm.var(vb[0]) + s}) if s else rb
        pb = atom_poly(rbs)
        if not pa or not pb or pa.keys() != pb.keys():
            continue
        m = next(iter(pa))
        scale = pa[m] / pb[m]
        if any(pa[k] != scale * pb[k] for k in pa):
            continue
        diff = Add((ra, Mul((Const(-scale), rbs))))
        try:
            fld = field_of(diff)
            cases = [ParityCase(0, p, binet_normalize(diff, p, va, fld)) for p in _parities(va)]
        except UnsupportedError:
            cases = []
        if all(c.residual.is_zero() for c in cases):
            return Equivalence(True, s, scale, cases)
    return Equivalence(False)
