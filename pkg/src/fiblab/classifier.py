"""Degree analysis and homogeneity classes of identities."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .dsl.ast import (
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
)

__all__ = [
    "HOMOGENEOUS",
    "NONHOMOGENEOUS",
    "GENERAL",
    "DegreeProfile",
    "degree_profile",
    "classify",
    "class_slug",
]

HOMOGENEOUS = "HomogeneousCubic"
NONHOMOGENEOUS = "NonHomogeneousCubic"
GENERAL = "GeneralFamily"

_SLUGS = {HOMOGENEOUS: "homogeneous-cubic", NONHOMOGENEOUS: "nonhomogeneous-cubic", GENERAL: "general"}


def class_slug(verdict: str) -> str:
    """Corpus ``class`` spelling of a verdict (``Other(d)`` maps to ``other``)."""
    return _SLUGS.get(verdict, "other")


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    max_degree: int
    has_constant: bool
    has_parameters: bool
    free_indices: int

    @property
    def is_cubic(self) -> bool:
        return self.max_degree == 3

    @property
    def is_homogeneous(self) -> bool:
        return self.is_cubic and not self.has_constant and all(d == 3 for d in self.degrees)


# Each expression expands to a Counter mapping F-degree to the number of
# additive terms of that degree. Coefficients are not tracked, so terms that
# cancel after distribution still count.


def _mul(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for da, ca in a.items():
        for db, cb in b.items():
            out[da + db] += ca * cb
    return out


def _degrees(e: Expr) -> Counter:
    if isinstance(e, (Fib, Lucas, KFib, GenFib)):
        # a constant index is just a number
        return Counter({0 if e.index.is_const else 1: 1})
    if isinstance(e, Const):
        return Counter({0: 1}) if e.value else Counter()
    if isinstance(e, (Sign, Binom, IndexVal)):
        return Counter({0: 1})
    if isinstance(e, Neg):
        return _degrees(e.arg)
    if isinstance(e, Sum):
        return _degrees(e.body)
    if isinstance(e, Add):
        out: Counter = Counter()
        for t in e.terms:
            out.update(_degrees(t))
        return out
    if isinstance(e, Mul):
        acc = Counter({0: 1})
        for f in e.factors:
            acc = _mul(acc, _degrees(f))
        return acc
    if isinstance(e, Pow):
        base = _degrees(e.base)
        if not e.exp.is_const:
            # symbolic exponent (families only): report the base's degrees
            return base
        acc = Counter({0: 1})
        for _ in range(e.exp.const):
            acc = _mul(acc, base)
        return acc
    raise TypeError(f"cannot take the degree of {type(e).__name__}")


def degree_profile(ident: Identity) -> DegreeProfile:
    total: Counter = Counter()
    for s in ident.sides:
        total.update(_degrees(s))
    degrees = tuple(sorted(d for d, c in total.items() for _ in range(c)))
    return DegreeProfile(
        degrees=degrees,
        max_degree=max(degrees, default=0),
        has_constant=0 in total,
        has_parameters=bool(ident.params),
        free_indices=len(ident.indices),
    )


def classify(ident: Identity) -> str:
    """``HomogeneousCubic``, ``NonHomogeneousCubic``, ``GeneralFamily`` or ``Other(d)``.

    Families (declared parameters, or more than one free index) are
    ``GeneralFamily``; otherwise the verdict follows the F-degrees of the
    additive terms after distributing every product.
    """
    p = degree_profile(ident)
    if p.has_parameters or p.free_indices > 1:
        return GENERAL
    if p.is_homogeneous:
        return HOMOGENEOUS
    if p.is_cubic:
        return NONHOMOGENEOUS
    return f"Other({p.max_degree})"
