"""Linear identities from the umbral formulas ``U^n (U + 1)^p`` and ``U^n (U - 1)^p``.

After binomial expansion each power ``U^j`` is lowered to ``F[n+j]``. Since
``U^2 = U + 1`` umbrally, ``U^n (U+1)^p`` is ``F[n+2p]``; likewise
``U^n (U-1)^p = U^n U^(-p)`` is ``F[n-p]``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from .ast import Add, Condition, Const, Fib, Identity, Meta, Mul
from .lin import LinForm
from .transform import canonicalize

__all__ = ["expand_umbral"]


def expand_umbral(p: int, variant: str = "plus") -> Identity:
    if p < 1:
        raise ValueError(f"umbral order must be >= 1, got {p}")
    if variant not in ("plus", "minus"):
        raise ValueError(f"variant must be 'plus' or 'minus', got {variant!r}")
    n = LinForm.var("n")
    terms = []
    for j in range(p, -1, -1):
        c = comb(p, j)
        if variant == "minus" and (p - j) % 2:
            c = -c
        atom = Fib(n + j)
        terms.append(atom if c == 1 else Mul((Const(Fraction(c)), atom)))
    if variant == "plus":
        left, lower = Fib(n + 2 * p), 0
    else:
        left, lower = Fib(n - p), p
    right = canonicalize(Add(tuple(terms)))
    meta = Meta(id=f"umbral-{variant}-{p}", claimed_class="warmup")
    return Identity((left, right), (Condition("n", (LinForm((), lower),)),), (), meta)
