"""Integer-relation search for cubic Fibonacci identities.

Each basis monomial is sampled at consecutive indices; the exact integer
matrix is reduced fraction-free and its kernel mined for relations. Besides a
kernel basis, all relations with at most three nonzero coefficients are
extracted directly (they are rarely basis vectors once the basis is large).
Candidates are re-checked on a disjoint index range and then handed to the
prover; only proven identities count as discoveries.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import kernels
from .classifier import HOMOGENEOUS, classify
from .dsl.ast import Add, Condition, Const, Expr, Fib, Identity, Meta, Mul, Pow, Sign, walk
from .dsl.lin import LinForm
from .dsl.parser import parse_expr
from .dsl.printer import render, render_expr
from .dsl.transform import canonicalize
from .evaluator import check_identity, eval_expr
from .prover import PROVEN, ProofOutcome, prove

__all__ = [
    "MAX_BASIS",
    "Basis",
    "RelationCandidate",
    "make_basis",
    "parse_targets",
    "search",
    "confirm",
    "discover",
    "to_catalog",
]

MAX_BASIS = 200
CONFIRM_SPAN = 40
KINDS = ("cubes", "distinct", "split12")

_N = LinForm.var("n")


def _fib(c: int) -> Expr:
    return Fib(_N + c)


class Basis:
    """Distinct monomials in one free index ``n``."""

    def __init__(self, monomials: Sequence[Expr], n_targets: int = 0):
        canon = [canonicalize(m) for m in monomials]
        seen: dict[Expr, int] = {}
        for i, m in enumerate(canon):
            if m in seen:
                raise ValueError(f"duplicate basis monomial {render_expr(m)} at positions {seen[m]} and {i}")
            seen[m] = i
        if len(canon) > MAX_BASIS:
            raise ValueError(f"basis has {len(canon)} monomials; the limit is {MAX_BASIS}")
        self.monomials = tuple(canon)
        self.n_targets = n_targets

    def __len__(self) -> int:
        return len(self.monomials)

    def labels(self) -> list[str]:
        return [render_expr(m) for m in self.monomials]

    def min_offset(self) -> int:
        lows = [0]
        for m in self.monomials:
            for node in _atoms(m):
                lows.append(node.index.const)
        return min(lows)


def _atoms(e: Expr):
    return (x for x in walk(e) if isinstance(x, Fib))


def make_basis(window: Iterable[int], kinds: Sequence[str] = ("cubes",), targets: Sequence[Expr] = ()) -> Basis:
    """Degree-3 monomials over ``F[n+a]``, ``a`` in ``window``, then the targets.

    ``cubes``: ``F[n+a]^3``; ``distinct``: ``F[n+a]F[n+b]F[n+c]`` with
    ``a < b < c``; ``split12``: ``F[n+a]F[n+b]^2`` with ``a != b``. Offsets
    are taken in descending order.
    """
    offs = sorted(set(window), reverse=True)
    mons: list[Expr] = []
    for kind in kinds:
        if kind == "cubes":
            mons.extend(Pow(_fib(a), LinForm((), 3)) for a in offs)
        elif kind == "distinct":
            mons.extend(Mul((_fib(a), _fib(b), _fib(c))) for a, b, c in itertools.combinations(offs, 3))
        elif kind == "split12":
            mons.extend(Mul((_fib(a), Pow(_fib(b), LinForm((), 2)))) for a in offs for b in offs if a != b)
        else:
            raise ValueError(f"unknown monomial kind {kind!r}; expected one of {', '.join(KINDS)}")
    return Basis(mons + list(targets), n_targets=len(targets))


def parse_targets(text: str) -> list[Expr]:
    """Targets from a comma-separated list.

    Items are DSL expressions in ``n`` or shorthands: ``one`` (the constant 1),
    ``F3:a..b`` (``F[3n+c]``) and ``sign:a..b`` (``(-1)^n*F[n+c]``).
    """
    out: list[Expr] = []
    for item in filter(None, (p.strip() for p in _split_top(text))):
        head, sep, rng = item.partition(":")
        if item == "one":
            out.append(Const(Fraction(1)))
        elif sep and head in ("F3", "sign"):
            lo, _, hi = rng.partition("..")
            cs = range(int(lo), int(hi or lo) + 1)
            if head == "F3":
                out.extend(Fib(LinForm.var("n", 3) + c) for c in cs)
            else:
                out.extend(Mul((Sign(_N), _fib(c))) for c in cs)
        else:
            out.append(parse_expr(item))
    return out


def _split_top(s: str) -> list[str]:
    # commas inside brackets belong to the expression
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


@dataclass(frozen=True)
class RelationCandidate:
    """``sum(coeffs[i] * basis[i]) == 0``; primitive, first nonzero positive."""

    coeffs: tuple[int, ...]
    basis: Basis

    @property
    def norm1(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    def sort_key(self):
        return (self.norm1, len(self.support), tuple(-c for c in self.coeffs))

    def to_identity(self, lower: Optional[int] = None, ident_id: str = "") -> Identity:
        """Positive terms on the left, negated negative terms on the right."""
        left: list[Expr] = []
        right: list[Expr] = []
        for c, m in zip(self.coeffs, self.basis.monomials):
            if not c:
                continue
            side = left if c > 0 else right
            side.append(m if abs(c) == 1 else Mul((Const(Fraction(abs(c))), m)))
        sides = tuple(canonicalize(Add(tuple(s))) if s else Const(Fraction(0)) for s in (left, right))
        lo = max(0, -self.basis.min_offset()) if lower is None else lower
        return Identity(sides, (Condition("n", (LinForm((), lo),)),), (), Meta(id=ident_id, claimed_class="discovered"))


def _matrix(basis: Basis, samples: Sequence[int]) -> list[list[int]]:
    rows = []
    for n in samples:
        env = {"n": n}
        row = []
        for m in basis.monomials:
            v = eval_expr(m, env)
            if v.denominator != 1:
                raise ValueError("basis monomials must be integer valued")
            row.append(v.numerator)
        rows.append(row)
    return rows


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(kernels.primitive(list(v)))


def search(
    window: Iterable[int],
    targets: Sequence[Expr] = (),
    samples: Optional[Sequence[int]] = None,
    kinds: Sequence[str] = ("cubes",),
    degree: int = 3,
    require_target: bool = True,
    basis: Optional[Basis] = None,
) -> list[RelationCandidate]:
    """Exact relations among the basis monomials, sorted simplest first.

    With ``require_target`` (and at least one target) only relations that use
    a target column are kept.
    """
    if degree != 3:
        raise ValueError("only degree-3 bases are supported")
    basis = basis or make_basis(window, kinds, targets)
    k = len(basis)
    start = max(0, -basis.min_offset())
    if samples is None:
        samples = range(start, start + k + 5)
    samples = list(samples)
    if len(samples) < k + 5:
        raise ValueError(f"need at least {k + 5} samples for {k} monomials, got {len(samples)}")
    rows = _matrix(basis, samples)
    reduced, _, _ = kernels.rref(rows)
    vecs = {_primitive(v) for v in kernels.nullspace(rows, k)}
    vecs.update(_primitive(v) for v in kernels.circuits(reduced, k, 3))
    first_target = k - basis.n_targets
    out = []
    hi = max(samples)
    confirm_range = (hi + 1, hi + CONFIRM_SPAN)
    for v in sorted(vecs):
        if not any(v):
            continue
        if require_target and basis.n_targets and not any(v[first_target:]):
            continue
        cand = RelationCandidate(v, basis)
        report = check_identity(cand.to_identity(), sweep={"n": confirm_range})
        if report.ok:
            out.append(cand)
    out.sort(key=RelationCandidate.sort_key)
    return out


def confirm(cands: Sequence[RelationCandidate]) -> list[tuple[Identity, ProofOutcome]]:
    """Prove each candidate; only proven identities are returned."""
    found = []
    for i, c in enumerate(cands, 1):
        ident = c.to_identity(ident_id=f"discovered-{i}")
        outcome = prove(ident)[0]
        if outcome.status == PROVEN:
            found.append((ident, outcome))
    return found


def discover(window: Iterable[int], targets: Sequence[Expr] = (), **kw) -> list[tuple[Identity, ProofOutcome]]:
    return confirm(search(window, targets, **kw))


def to_catalog(found: Sequence[tuple[Identity, ProofOutcome]]) -> str:
    """Discoveries as corpus records (append-ready)."""
    lines = []
    for ident, _ in found:
        text = render(ident)
        eq, _, cond = text.partition(" ; ")
        lines += [
            "[identity]",
            f"id = {json.dumps(ident.meta.id)}",
            f"eq = {json.dumps(eq)}",
            f"cond = {json.dumps(cond)}",
            'authors = "fiblab search"',
            f"paper_tag = {json.dumps('search/' + ident.meta.id)}",
            "class = homogeneous-cubic" if classify(ident) == HOMOGENEOUS else "class = nonhomogeneous-cubic",
            "",
        ]
    return "\n".join(lines)

