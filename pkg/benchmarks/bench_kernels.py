"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Times the exact sweep of a three-index identity over a 25^3 grid, a 300-value
single-index sweep, and the fraction-free elimination behind the relation
search. Both implementations must agree on every result.
"""
from __future__ import annotations

import argparse
import time

from fiblab import _pykernels, kernels
from fiblab.discovery import _matrix, make_basis, parse_targets
from fiblab.dsl import parse
from fiblab.evaluator import check_identity

try:
    from fiblab import _ckernels
except ImportError:  # extension not built
    _ckernels = None

THREE_INDEX = (
    "F[r+s+t] = F[r+1]*F[s+1]*F[t+1] + F[r]*F[s]*F[t] - F[r-1]*F[s-1]*F[t-1] ; r >= 1, s >= 1, t >= 1"
)
ONE_INDEX = "F[n+1]^3 + F[n]^3 - F[n-1]^3 = F[3n] ; n >= 1"


def _use(impl) -> None:
    for name in ("sweep", "rref", "nullspace", "circuits", "primitive"):
        setattr(kernels, name, getattr(impl, name))


def _best(fn, repeat: int):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def cases():
    tri = parse(THREE_INDEX)
    one = parse(ONE_INDEX)
    basis = make_basis(range(0, 7), ("cubes", "distinct"), parse_targets("sign:0..6"))
    rows = _matrix(basis, range(0, len(basis) + 5))
    return [
        ("sweep 3-index 25^3", lambda: check_identity(tri, sweep={v: (1, 25) for v in "rst"}).status),
        ("sweep 1-index x300", lambda: check_identity(one).status),
        (f"rref {len(rows)}x{len(basis)}", lambda: kernels.rref(rows)[1]),
        ("nullspace", lambda: sorted(map(tuple, kernels.nullspace(rows, len(basis))))),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels unavailable; timing the fallback only")
    saved = {n: getattr(kernels, n) for n in ("sweep", "rref", "nullspace", "circuits", "primitive")}
    try:
        print(f"{'case':28} " + " ".join(f"{name:>10}" for name, _ in impls) + "    speedup")
        for label, fn in cases():
            times, results = [], []
            for _, impl in impls:
                _use(impl)
                t, r = _best(fn, args.repeat)
                times.append(t)
                results.append(r)
            if any(r != results[0] for r in results):
                raise SystemExit(f"{label}: implementations disagree")
            speed = f"{times[0] / times[1]:8.1f}x" if len(times) > 1 else ""
            print(f"{label:28} " + " ".join(f"{t * 1e3:8.1f}ms" for t in times) + f"  {speed}")
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


if __name__ == "__main__":
    main()
