"""Multivariate Laurent polynomials with quadratic-field coefficients."""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .quadfield import QuadRat

Exps = tuple[int, ...]


class LaurentPoly:
    """Immutable map from exponent vectors to nonzero :class:`QuadRat`.

    One exponent slot per free index; exponents may be negative.
    """

    __slots__ = ("nvars", "terms", "d")

    def __init__(self, nvars: int, terms: Mapping[Exps, QuadRat] | None = None, d: int = 5):
        self.nvars = nvars
        self.d = d
        self.terms: dict[Exps, QuadRat] = {k: v for k, v in (terms or {}).items() if v}

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, value, nvars: int, d: int = 5) -> "LaurentPoly":
        c = value if isinstance(value, QuadRat) else QuadRat(value, 0, d)
        return cls(nvars, {(0,) * nvars: c}, d)

    @classmethod
    def monomial(cls, coeff: QuadRat, exps: Sequence[int], d: int = 5) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): coeff}, d)

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.const(other, self.nvars, self.d)

    def __add__(self, other) -> "LaurentPoly":
        o = self._lift(other)
        out = dict(self.terms)
        for k, v in o.terms.items():
            cur = out.get(k)
            out[k] = v if cur is None else cur + v
        return LaurentPoly(self.nvars, out, self.d)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {k: -v for k, v in self.terms.items()}, self.d)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = other if isinstance(other, QuadRat) else QuadRat(other, 0, self.d)
            return LaurentPoly(self.nvars, {k: v * c for k, v in self.terms.items()}, self.d)
        out: dict[Exps, QuadRat] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                p = va * vb
                cur = out.get(k)
                out[k] = p if cur is None else cur + p
        return LaurentPoly(self.nvars, out, self.d)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            raise ValueError("negative power of a Laurent polynomial")
        result = LaurentPoly.const(1, self.nvars, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            other = self._lift(other)
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, point: Sequence[QuadRat]) -> QuadRat:
        """Value with ``t_i = point[i]`` (each nonzero)."""
        acc = QuadRat(0, 0, self.d)
        for k, v in self.terms.items():
            term = v
            for x, e in zip(point, k):
                if e:
                    term = term * (x**e)
            acc = acc + term
        return acc

    def sorted_terms(self) -> list[tuple[Exps, QuadRat]]:
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "LaurentPoly(0)"
        parts = []
        for k, v in self.sorted_terms():
            mono = "*".join(f"t{i}^{e}" for i, e in enumerate(k) if e)
            parts.append(f"({v})" + (f"*{mono}" if mono else ""))
        return "LaurentPoly(" + " + ".join(parts) + ")"


def lsum(polys: Iterable[LaurentPoly], nvars: int, d: int = 5) -> LaurentPoly:
    acc = LaurentPoly(nvars, {}, d)
    for p in polys:
        acc = acc + p
    return acc
