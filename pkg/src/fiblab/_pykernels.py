"""Pure-Python implementations of the hot loops.

The sweep compiles each identity side from the shared tuple IR (see
:mod:`fiblab.evaluator`) into a Python function, so the inner loop is one call
per side per assignment. The compiled extension in ``_ckernels`` walks the same
IR directly.
"""
from __future__ import annotations

import itertools
from math import comb, gcd

IMPLEMENTATION = "python"

CONST, SEQ, SIGN, BINOM, POW, ADD, MUL, SUM, IDX = range(9)


def _binom(u, l):
    if l < 0 or u < 0 or l > u:
        return 0
    return comb(u, l)


def _lin_src(coeffs, const):
    parts = [str(const)]
    for slot, c in coeffs:
        parts.append(f"{c}*e{slot}")
    return "(" + "+".join(parts) + ")"


class _Gen:
    def __init__(self):
        self.names = {"_binom": _binom}

    def bind(self, value) -> str:
        name = f"K{len(self.names)}"
        self.names[name] = value
        return name

    def src(self, node) -> str:
        tag = node[0]
        if tag == CONST:
            v = node[1]
            if isinstance(v, int):
                return f"({v})"
            return self.bind(v)
        if tag == SEQ:
            _, table, base, coeffs, const = node
            return f"{self.bind(table)}[{_lin_src(coeffs, const + base)}]"
        if tag == SIGN:
            return f"(1-2*({_lin_src(node[1], node[2])}&1))"
        if tag == BINOM:
            return f"_binom({_lin_src(node[1], node[2])},{_lin_src(node[3], node[4])})"
        if tag == POW:
            return f"({self.src(node[1])})**{_lin_src(node[2], node[3])}"
        if tag == ADD:
            return "(" + "+".join(self.src(c) for c in node[1]) + ")"
        if tag == MUL:
            return "(" + "*".join(self.src(c) for c in node[1]) + ")"
        if tag == SUM:
            _, slot, lc, lk, hc, hk, child = node
            return f"sum({self.src(child)} for e{slot} in range({_lin_src(lc, lk)},{_lin_src(hc, hk)}+1))"
        if tag == IDX:
            return _lin_src(node[1], node[2])
        raise ValueError(f"bad IR tag {tag}")


def compile_side(node, nfree: int):
    """Python callable of the free slots ``e0..e{nfree-1}``."""
    g = _Gen()
    body = g.src(node)
    args = ",".join(f"e{i}" for i in range(nfree))
    code = f"def _f({args}):\n    return {body}\n"
    ns = dict(g.names)
    exec(compile(code, "<fiblab-sweep>", "exec"), ns)
    return ns["_f"]


def sweep(pairs, ranges, nslots):
    """Evaluate every pair at every assignment in lexicographic order.

    ``pairs`` is a list of ``(pair_index, left_ir, right_ir)``; ``ranges`` a
    list of inclusive ``(lo, hi)`` per free slot. Returns ``(count, None)`` or
    ``(count, (assignment, pair_index, left, right))`` at the first mismatch.
    """
    nfree = len(ranges)
    compiled = [(i, compile_side(l, nfree), compile_side(r, nfree)) for i, l, r in pairs]
    count = 0
    for env in itertools.product(*(range(lo, hi + 1) for lo, hi in ranges)):
        count += 1
        for i, fl, fr in compiled:
            a = fl(*env)
            b = fr(*env)
            if a != b:
                return count, (env, i, a, b)
    return count, None


# -- exact linear algebra ---------------------------------------------------


def rref(rows):
    """Fraction-free Gauss-Jordan elimination (Bareiss).

    Returns ``(matrix, pivots, d)`` where ``matrix`` holds the ``rank`` nonzero
    rows, ``pivots`` their pivot columns and every pivot entry equals ``d``.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        row_r = m[r]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[c]
            for j in range(ncols):
                row[j] = (piv * row[j] - a * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    if not pivots:
        return [], [], 1
    d = m[r - 1][pivots[-1]]
    return m[:r], pivots, d


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    v = [x // g for x in v]
    first = next(x for x in v if x)
    return [-x for x in v] if first < 0 else v


def nullspace(rows, ncols):
    """Primitive integer basis of the right nullspace of ``rows``."""
    if not rows:
        return [primitive([int(i == j) for j in range(ncols)]) for i in range(ncols)]
    m, pivots, d = rref(rows)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = d
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        out.append(primitive(v))
    return out


def _det2(a, b, c, d):
    return a * d - b * c


def circuits(m, ncols, max_size=3):
    """Minimal-support integer relations among the columns of ``m``.

    ``m`` must be the reduced row basis from :func:`rref` (few rows). Only
    supports of size 2 and 3 are searched.
    """
    cols = [tuple(row[j] for row in m) for j in range(ncols)]
    nonzero = [j for j in range(ncols) if any(cols[j])]
    out = []
    # a zero column is a size-1 relation
    for j in range(ncols):
        if not any(cols[j]):
            v = [0] * ncols
            v[j] = 1
            out.append(v)

    def dependent2(a, b):
        ca, cb = cols[a], cols[b]
        return all(_det2(ca[i], cb[i], ca[k], cb[k]) == 0 for i in range(len(ca)) for k in range(i + 1, len(ca)))

    dep2 = set()
    for a, b in itertools.combinations(nonzero, 2):
        if dependent2(a, b):
            dep2.add((a, b))
            ca, cb = cols[a], cols[b]
            i = next(i for i in range(len(ca)) if ca[i])
            v = [0] * ncols
            v[a], v[b] = cb[i], -ca[i]
            out.append(primitive(v))
    if max_size < 3:
        return out
    nr = len(m)
    for a, b, c in itertools.combinations(nonzero, 3):
        if (a, b) in dep2 or (a, c) in dep2 or (b, c) in dep2:
            continue
        ca, cb, cc = cols[a], cols[b], cols[c]
        # rank 2 iff every 3x3 minor vanishes; the null vector is the cross
        # product of two independent rows
        vec = None
        ok = True
        for i in range(nr):
            if not ok:
                break
            for k in range(i + 1, nr):
                x = (
                    _det2(cb[i], cc[i], cb[k], cc[k]),
                    -_det2(ca[i], cc[i], ca[k], cc[k]),
                    _det2(ca[i], cb[i], ca[k], cb[k]),
                )
                if vec is None:
                    if any(x):
                        vec = x
                    continue
                # x must be parallel to vec
                if any(vec[p] * x[q] != vec[q] * x[p] for p in range(3) for q in range(p + 1, 3)):
                    ok = False
                    break
        if not ok or vec is None:
            continue
        if not all(ca[i] * vec[0] + cb[i] * vec[1] + cc[i] * vec[2] == 0 for i in range(nr)):
            continue
        if not all(vec):
            continue
        v = [0] * ncols
        v[a], v[b], v[c] = vec
        out.append(primitive(v))
    return out
