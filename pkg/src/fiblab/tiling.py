"""Fibonacci cube spirals from iterated affine maps, in exact arithmetic.

Starting from the unit cube, ``C[n+1] = M[n] C[n] + b[n]`` where every
``M[n]`` is ``F[n+1]/F[n]`` times a signed axis permutation. Images of
axis-aligned boxes therefore stay axis-aligned, and each box is stored by its
min/max corners as Fractions.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .sequences import fib

__all__ = [
    "AffineStep",
    "Cuboid",
    "PackingReport",
    "affine_step",
    "generate",
    "analyze",
    "export",
    "load_json",
    "MAPS",
]

MAPS = (1, 2, 3)

Vec = tuple[Fraction, Fraction, Fraction]
Mat = tuple[Vec, Vec, Vec]


def _vec(*xs) -> Vec:
    return tuple(Fraction(x) for x in xs)  # type: ignore[return-value]


@dataclass(frozen=True)
class AffineStep:
    map_id: int
    n: int
    matrix: Mat
    offset: Vec

    @property
    def scale(self) -> Fraction:
        return Fraction(fib(self.n + 1), fib(self.n))

    def apply(self, p: Sequence[Fraction]) -> Vec:
        return tuple(sum((row[j] * p[j] for j in range(3)), Fraction(0)) + self.offset[i] for i, row in enumerate(self.matrix))  # type: ignore[return-value]

    def gram(self) -> Mat:
        """``matrix^T matrix``."""
        m = self.matrix
        return tuple(tuple(sum((m[k][i] * m[k][j] for k in range(3)), Fraction(0)) for j in range(3)) for i in range(3))  # type: ignore[return-value]

    def det(self) -> Fraction:
        m = self.matrix
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )


def affine_step(i: int, n: int) -> AffineStep:
    """``(M[n], b[n])`` of map ``i``."""
    if i not in MAPS:
        raise ValueError(f"map id must be 1, 2 or 3, got {i}")
    if n < 1:
        raise ValueError(f"step must be >= 1, got {n}")
    r = Fraction(fib(n + 1), fib(n))
    s = 1 if n % 2 else -1  # (-1)^(n+1)
    even = n % 2 == 0
    if i == 1:
        diag = (s, s, -s)
        offset = _vec(1 + r, 1 + r, 1 - r) if even else _vec(0, 0, 0)
        perm = ((diag[0], 0, 0), (0, diag[1], 0), (0, 0, diag[2]))
    elif i == 2:
        perm = ((0, -1, 0), (0, 0, 1), (-1, 0, 0))
        offset = _vec(r, -r, r)
    else:
        diag = (1, s, -s)
        offset = _vec(1 - r, 1 + r, 1 - r) if even else _vec(0, 0, 0)
        perm = ((diag[0], 0, 0), (0, diag[1], 0), (0, 0, diag[2]))
    matrix = tuple(tuple(r * x for x in row) for row in perm)
    return AffineStep(i, n, matrix, offset)  # type: ignore[arg-type]


@dataclass(frozen=True)
class Cuboid:
    n: int
    lo: Vec
    hi: Vec

    def __post_init__(self):
        if not all(a < b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"degenerate box {self.lo}..{self.hi}")

    @property
    def edges(self) -> Vec:
        return tuple(b - a for a, b in zip(self.lo, self.hi))  # type: ignore[return-value]

    @property
    def side(self) -> Fraction:
        e = self.edges
        if not e[0] == e[1] == e[2]:
            raise ValueError(f"box {self.n} is not a cube: edges {e}")
        return e[0]

    @property
    def center(self) -> Vec:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))  # type: ignore[return-value]

    def corners(self) -> list[Vec]:
        return [tuple(c) for c in itertools.product(*zip(self.lo, self.hi))]  # type: ignore[misc]

    def interiors_overlap(self, other: "Cuboid") -> bool:
        return all(a1 < b2 and a2 < b1 for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi))


def _image(box: Cuboid, step: AffineStep) -> Cuboid:
    pts = [step.apply(c) for c in (box.lo, box.hi)]
    lo = tuple(min(p[k] for p in pts) for k in range(3))
    hi = tuple(max(p[k] for p in pts) for k in range(3))
    return Cuboid(step.n + 1, lo, hi)  # type: ignore[arg-type]


def generate(i: int, count: int) -> list[Cuboid]:
    """``C[1..count]`` for map ``i``."""
    if count < 1:
        raise ValueError("need at least one box")
    boxes = [Cuboid(1, _vec(0, 0, 0), _vec(1, 1, 1))]
    for n in range(1, count):
        # the matrices are signed axis permutations, so opposite corners map
        # to opposite corners
        boxes.append(_image(boxes[-1], affine_step(i, n)))
    return boxes


@dataclass
class PackingReport:
    map_id: int
    sides: list[tuple[int, Fraction]]
    sides_are_fib: bool
    coplanar: bool
    diagonal_plane: bool
    disjoint: bool
    overlap: Optional[tuple[int, int]] = None
    ratios: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "map": self.map_id,
            "count": len(self.sides),
            "sides": [[n, str(s)] for n, s in self.sides],
            "sides_are_fib": self.sides_are_fib,
            "coplanar": self.coplanar,
            "diagonal_plane": self.diagonal_plane,
            "disjoint": self.disjoint,
            "overlap": list(self.overlap) if self.overlap else None,
            "ratios": self.ratios,
        }


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))  # type: ignore[return-value]


def _cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _coplanar(points: list[Vec]) -> bool:
    if len(points) < 4:
        return True
    p0 = points[0]
    normal = None
    for p, q in itertools.combinations(points[1:], 2):
        c = _cross(_sub(p, p0), _sub(q, p0))
        if any(c):
            normal = c
            break
    if normal is None:
        return True  # collinear
    return all(_dot(normal, _sub(p, p0)) == 0 for p in points)


def analyze(boxes: Sequence[Cuboid], i: int) -> PackingReport:
    sides = [(b.n, b.side) for b in boxes]
    centers = [b.center for b in boxes]
    overlap = None
    for a, b in itertools.combinations(boxes, 2):
        if a.interiors_overlap(b):
            overlap = (a.n, b.n)
            break
    ratios = []
    disp = [math.sqrt(float(_dot(d, d))) for d in (_sub(q, p) for p, q in zip(centers, centers[1:]))]
    # disp[j] is |c[j+2] - c[j+1]| in 1-based box numbering
    for j in range(len(disp) - 2):
        if disp[j]:
            ratios.append(disp[j + 2] / disp[j])
    return PackingReport(
        map_id=i,
        sides=sides,
        sides_are_fib=all(s == fib(n) for n, s in sides),
        coplanar=_coplanar(centers),
        diagonal_plane=all(c[0] == c[1] for c in centers),
        disjoint=overlap is None,
        overlap=overlap,
        ratios=ratios,
    )


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def export(boxes: Sequence[Cuboid], fmt: str = "json") -> bytes:
    """JSON records with exact ``p/q`` corners, or a Wavefront OBJ mesh."""
    if fmt == "json":
        recs = [
            {
                "n": b.n,
                "min": [_frac(x) for x in b.lo],
                "max": [_frac(x) for x in b.hi],
                "min_f": [float(x) for x in b.lo],
                "max_f": [float(x) for x in b.hi],
            }
            for b in boxes
        ]
        return (json.dumps(recs, indent=1) + "\n").encode()
    if fmt == "obj":
        lines = ["# Fibonacci cube spiral"]
        base = 1
        for b in boxes:
            lines.append(f"g cube_{b.n}")
            # corner index bits: x -> 4, y -> 2, z -> 1
            for c in b.corners():
                lines.append("v " + " ".join(f"{float(x):.12g}" for x in c))
            for quad in ((0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)):
                lines.append("f " + " ".join(str(base + q) for q in quad))
            base += 8
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}; expected json or obj")


def load_json(data: bytes | str) -> list[Cuboid]:
    """Inverse of ``export(..., "json")``."""
    recs = json.loads(data)
    return [Cuboid(r["n"], tuple(Fraction(x) for x in r["min"]), tuple(Fraction(x) for x in r["max"])) for r in recs]  # type: ignore[arg-type]
