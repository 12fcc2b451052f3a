"""Integer index forms such as ``3n+2``, ``2k-1`` or ``kn+m``.

A :class:`LinForm` is an integer polynomial over single-letter variables.
Identities proper only ever use linear forms; products of letters (``kn``,
``hm``) exist so that parameterized families can be written down before their
parameters are bound to integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

Monomial = tuple[str, ...]


def _mono_key(m: Monomial) -> tuple[int, Monomial]:
    return (len(m), m)


@dataclass(frozen=True)
class LinForm:
    terms: tuple[tuple[Monomial, int], ...] = ()
    const: int = 0

    # -- construction -----------------------------------------------------
    @staticmethod
    def from_dict(coeffs: Mapping[Monomial, int], const: int = 0) -> "LinForm":
        items = [(tuple(sorted(m)), c) for m, c in coeffs.items() if c]
        merged: dict[Monomial, int] = {}
        for m, c in items:
            merged[m] = merged.get(m, 0) + c
        terms = tuple(sorted(((m, c) for m, c in merged.items() if c), key=lambda t: _mono_key(t[0])))
        return LinForm(terms, const)

    @staticmethod
    def var(name: str, coeff: int = 1) -> "LinForm":
        return LinForm.from_dict({(name,): coeff})

    @staticmethod
    def of(value: Union["LinForm", int]) -> "LinForm":
        return value if isinstance(value, LinForm) else LinForm((), int(value))

    # -- queries ----------------------------------------------------------
    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for m, _ in self.terms for v in m)

    @property
    def is_const(self) -> bool:
        return not self.terms

    @property
    def is_linear(self) -> bool:
        return all(len(m) == 1 for m, _ in self.terms)

    def coeff(self, name: str) -> int:
        for m, c in self.terms:
            if m == (name,):
                return c
        return 0

    def linear_coeffs(self) -> dict[str, int]:
        if not self.is_linear:
            raise ValueError(f"index form {self} is not linear")
        return {m[0]: c for m, c in self.terms}

    # -- arithmetic -------------------------------------------------------
    def _as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def __add__(self, other: Union["LinForm", int]) -> "LinForm":
        other = LinForm.of(other)
        d = self._as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return LinForm.from_dict(d, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "LinForm":
        return LinForm(tuple((m, -c) for m, c in self.terms), -self.const)

    def __sub__(self, other: Union["LinForm", int]) -> "LinForm":
        return self + (-LinForm.of(other))

    def __rsub__(self, other: int) -> "LinForm":
        return LinForm.of(other) - self

    def __mul__(self, other: Union["LinForm", int]) -> "LinForm":
        if isinstance(other, int):
            if other == 0:
                return LinForm()
            return LinForm(tuple((m, c * other) for m, c in self.terms), self.const * other)
        out: dict[Monomial, int] = {}
        a = list(self.terms) + [((), self.const)]
        b = list(other.terms) + [((), other.const)]
        const = 0
        for ma, ca in a:
            for mb, cb in b:
                m = tuple(sorted(ma + mb))
                if m:
                    out[m] = out.get(m, 0) + ca * cb
                else:
                    const += ca * cb
        return LinForm.from_dict(out, const)

    __rmul__ = __mul__

    def subs(self, bindings: Mapping[str, Union["LinForm", int]]) -> "LinForm":
        if not bindings or not (self.variables & bindings.keys()):
            return self
        acc = LinForm((), self.const)
        for m, c in self.terms:
            t = LinForm((), c)
            for v in m:
                t = t * (LinForm.of(bindings[v]) if v in bindings else LinForm.var(v))
            acc = acc + t
        return acc

    def evaluate(self, env: Mapping[str, int]) -> int:
        total = self.const
        for m, c in self.terms:
            p = c
            for v in m:
                p *= env[v]
            total += p
        return total

    # -- printing ---------------------------------------------------------
    def __str__(self) -> str:
        parts: list[str] = []
        for m, c in self.terms:
            name = "".join(m)
            if c == 1:
                body = name
            elif c == -1:
                body = "-" + name
            else:
                body = f"{c}{name}"
            if parts and not body.startswith("-"):
                body = "+" + body
            parts.append(body)
        if self.const or not parts:
            c = str(self.const)
            if parts and self.const > 0:
                c = "+" + c
            parts.append(c)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LinForm({str(self)!r})"
