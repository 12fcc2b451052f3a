"""Exact arithmetic in a real quadratic field Q(sqrt(d))."""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "QuadRat"]


def squarefree_split(n: int) -> tuple[int, int]:
    """``n = s*s*d`` with ``d`` squarefree; returns ``(s, d)``."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, d, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    return s, d * n


class QuadRat:
    """``a + b*sqrt(d)`` with rational ``a``, ``b`` and squarefree ``d > 1``.

    With ``d == 1`` the element is plain rational (``b`` is kept at zero).
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 5):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)
        self.d = d
        if d == 1 and self.b:
            self.a += self.b
            self.b = Fraction(0)

    def _coerce(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.d != self.d and other.b and self.b:
                raise ValueError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRat(other, 0, self.d)
        return NotImplemented

    def _field(self, o: "QuadRat") -> int:
        return self.d if self.b else o.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadRat(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadRat":
        return QuadRat(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadRat(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int) -> "QuadRat":
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadRat(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        if isinstance(other, QuadRat):
            return self.a == other.a and self.b == other.b and (not self.b or self.d == other.d)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d if self.b else 0))

    def is_rational(self) -> bool:
        return not self.b

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * self.d**0.5

    def __repr__(self) -> str:
        if not self.b:
            return f"QuadRat({self.a})"
        return f"QuadRat({self.a} + {self.b}*sqrt({self.d}))"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.d})" if self.a else f"{self.b}*sqrt({self.d})"
