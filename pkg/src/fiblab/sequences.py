"""Exact Fibonacci-family sequences.

All values are Python ints. Every sequence here obeys a two-term recurrence
``x[n+2] = k*x[n+1] + x[n]``, so a single memoized :class:`Recurrence` backs
Fibonacci (k=1), Lucas, k-Fibonacci and generalized (arbitrary seed) sequences.
Internally every recurrence also runs backwards, which gives the usual
negative-index extension, e.g. ``F(-n) = (-1)**(n+1) * F(n)``.
"""
from __future__ import annotations

import threading

__all__ = [
    "Recurrence",
    "fib",
    "lucas",
    "k_fib",
    "gen_fib",
    "recurrence",
]


class Recurrence:
    """Memoized two-sided sequence ``x[n+2] = k*x[n+1] + x[n]``."""

    __slots__ = ("k", "x0", "x1", "_pos", "_neg", "_lock")

    def __init__(self, k: int, x0: int, x1: int):
        self.k = k
        self.x0 = x0
        self.x1 = x1
        self._pos = [x0, x1]
        # _neg[i] holds x[-i]; _neg[0] duplicates x[0]
        self._neg = [x0]
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"Recurrence(k={self.k}, x0={self.x0}, x1={self.x1})"

    def _grow_pos(self, n: int) -> None:
        with self._lock:
            pos, k = self._pos, self.k
            a, b = pos[-2], pos[-1]
            for _ in range(len(pos), n + 1):
                a, b = b, k * b + a
                pos.append(b)

    def _grow_neg(self, m: int) -> None:
        # x[n] = x[n+2] - k*x[n+1]
        with self._lock:
            neg, k = self._neg, self.k
            if len(neg) == 1:
                neg.append(self.x1 - k * self.x0)
            while len(neg) <= m:
                i = len(neg)
                nxt1 = neg[i - 1]
                nxt2 = neg[i - 2] if i >= 2 else self.x1
                neg.append(nxt2 - k * nxt1)

    def __getitem__(self, n: int) -> int:
        if n >= 0:
            if n >= len(self._pos):
                self._grow_pos(n)
            return self._pos[n]
        m = -n
        if m >= len(self._neg):
            self._grow_neg(m)
        return self._neg[m]

    def table(self, lo: int, hi: int) -> list[int]:
        """Values for indices ``lo..hi`` inclusive, as a fresh list."""
        if hi < lo:
            return []
        self[hi]
        self[lo]
        out = []
        if lo < 0:
            top = min(hi, -1)
            out.extend(self._neg[-i] for i in range(lo, top + 1))
        if hi >= 0:
            out.extend(self._pos[max(lo, 0) : hi + 1])
        return out


_REGISTRY: dict[tuple[int, int, int], Recurrence] = {}
_REGISTRY_LOCK = threading.Lock()


def recurrence(k: int = 1, x0: int = 0, x1: int = 1) -> Recurrence:
    """Shared memoized recurrence keyed by ``(k, x0, x1)``."""
    key = (k, x0, x1)
    rec = _REGISTRY.get(key)
    if rec is None:
        with _REGISTRY_LOCK:
            rec = _REGISTRY.setdefault(key, Recurrence(k, x0, x1))
    return rec


def _direct(k: int, x0: int, x1: int, n: int) -> int:
    a, b = x0, x1
    if n >= 0:
        for _ in range(n):
            a, b = b, k * b + a
        return a
    for _ in range(-n):
        a, b = b - k * a, a
    return a


def fib(n: int, memo: bool = True) -> int:
    """Fibonacci number with ``F(0) = 0``, ``F(1) = 1``; any integer ``n``."""
    if memo:
        return recurrence(1, 0, 1)[n]
    return _direct(1, 0, 1, n)


def lucas(n: int, memo: bool = True) -> int:
    """Lucas number with ``L(0) = 2``, ``L(1) = 1``; ``n >= 0``."""
    if n < 0:
        raise ValueError(f"lucas: negative index {n} not supported")
    if memo:
        return recurrence(1, 2, 1)[n]
    return _direct(1, 2, 1, n)


def k_fib(k: int, n: int, memo: bool = True) -> int:
    """k-Fibonacci number: ``F(k, n+2) = k*F(k, n+1) + F(k, n)``, seeds 0, 1."""
    if k <= 0:
        raise ValueError(f"k_fib: k must be >= 1, got {k}")
    if n < 0:
        raise ValueError(f"k_fib: negative index {n} not supported")
    if memo:
        return recurrence(k, 0, 1)[n]
    return _direct(k, 0, 1, n)


def gen_fib(h0: int, h1: int, n: int, memo: bool = True) -> int:
    """Fibonacci recurrence with arbitrary integer seeds ``H(0)=h0, H(1)=h1``."""
    if n < 0:
        raise ValueError(f"gen_fib: negative index {n} not supported")
    if memo:
        return recurrence(1, h0, h1)[n]
    return _direct(1, h0, h1, n)
