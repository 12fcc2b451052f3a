# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sweep and elimination kernels.

Same contract as ``fiblab._pykernels``. Index arithmetic runs on C longs; the
sequence values themselves stay Python ints.
"""
from math import comb, gcd
import itertools

IMPLEMENTATION = "cython"

cdef enum:
    MAXV = 16

cdef enum:
    T_CONST = 0
    T_SEQ = 1
    T_SIGN = 2
    T_BINOM = 3
    T_POW = 4
    T_ADD = 5
    T_MUL = 6
    T_SUM = 7
    T_IDX = 8


cdef class _Lin:
    cdef int n
    cdef int slots[MAXV]
    cdef long coefs[MAXV]
    cdef long const

    cdef inline long ev(self, long* env):
        cdef long acc = self.const
        cdef int i
        for i in range(self.n):
            acc += self.coefs[i] * env[self.slots[i]]
        return acc


cdef _Lin _mklin(object coeffs, long const):
    cdef _Lin lf = _Lin.__new__(_Lin)
    cdef int i = 0
    if len(coeffs) > MAXV:
        raise ValueError("too many index variables")
    for slot, c in coeffs:
        lf.slots[i] = slot
        lf.coefs[i] = c
        i += 1
    lf.n = i
    lf.const = const
    return lf


cdef class _Node:
    cdef int tag
    cdef object value
    cdef list table
    cdef Py_ssize_t tlen
    cdef _Lin a
    cdef _Lin b
    cdef int slot
    cdef list kids
    cdef Py_ssize_t nkids


cdef _Node _build(object ir):
    cdef _Node nd = _Node.__new__(_Node)
    tag = ir[0]
    nd.tag = tag
    nd.kids = []
    nd.nkids = 0
    if tag == T_CONST:
        nd.value = ir[1]
    elif tag == T_SEQ:
        nd.table = ir[1]
        nd.tlen = len(ir[1])
        nd.a = _mklin(ir[3], ir[4] + ir[2])
    elif tag == T_SIGN or tag == T_IDX:
        nd.a = _mklin(ir[1], ir[2])
    elif tag == T_BINOM:
        nd.a = _mklin(ir[1], ir[2])
        nd.b = _mklin(ir[3], ir[4])
    elif tag == T_POW:
        nd.kids = [_build(ir[1])]
        nd.a = _mklin(ir[2], ir[3])
    elif tag == T_ADD or tag == T_MUL:
        nd.kids = [_build(c) for c in ir[1]]
    elif tag == T_SUM:
        nd.slot = ir[1]
        nd.a = _mklin(ir[2], ir[3])
        nd.b = _mklin(ir[4], ir[5])
        nd.kids = [_build(ir[6])]
    else:
        raise ValueError(f"bad IR tag {tag}")
    nd.nkids = len(nd.kids)
    return nd


cdef object _eval(_Node nd, long* env):
    cdef long j, lo, hi, u, l
    cdef Py_ssize_t i
    cdef object acc
    cdef int tag = nd.tag
    if tag == T_SEQ:
        j = nd.a.ev(env)
        if j < 0 or j >= nd.tlen:
            raise IndexError("sequence table too small for sweep")
        return nd.table[j]
    if tag == T_MUL:
        acc = _eval(<_Node>nd.kids[0], env)
        for i in range(1, nd.nkids):
            acc = acc * _eval(<_Node>nd.kids[i], env)
        return acc
    if tag == T_ADD:
        acc = _eval(<_Node>nd.kids[0], env)
        for i in range(1, nd.nkids):
            acc = acc + _eval(<_Node>nd.kids[i], env)
        return acc
    if tag == T_CONST:
        return nd.value
    if tag == T_POW:
        return _eval(<_Node>nd.kids[0], env) ** nd.a.ev(env)
    if tag == T_SIGN:
        return -1 if (nd.a.ev(env) & 1) else 1
    if tag == T_SUM:
        lo = nd.a.ev(env)
        hi = nd.b.ev(env)
        acc = 0
        for j in range(lo, hi + 1):
            env[nd.slot] = j
            acc = acc + _eval(<_Node>nd.kids[0], env)
        return acc
    if tag == T_BINOM:
        u = nd.a.ev(env)
        l = nd.b.ev(env)
        if l < 0 or u < 0 or l > u:
            return 0
        return comb(u, l)
    if tag == T_IDX:
        return nd.a.ev(env)
    raise ValueError("bad node")


def sweep(pairs, ranges, int nslots):
    cdef long env[MAXV]
    cdef long los[MAXV]
    cdef long his[MAXV]
    cdef int nfree = len(ranges)
    cdef int k
    cdef long count = 0
    cdef _Node ln, rn
    if nslots > MAXV:
        raise ValueError("too many index variables")
    built = [(i, _build(l), _build(r)) for i, l, r in pairs]
    for k in range(nfree):
        los[k] = ranges[k][0]
        his[k] = ranges[k][1]
        if his[k] < los[k]:
            return 0, None
        env[k] = los[k]
    if nfree == 0:
        count = 1
        for i, ln, rn in built:
            a = _eval(ln, env)
            b = _eval(rn, env)
            if a != b:
                return count, ((), i, a, b)
        return count, None
    while True:
        count += 1
        for i, ln, rn in built:
            a = _eval(ln, env)
            b = _eval(rn, env)
            if a != b:
                return count, (tuple([env[t] for t in range(nfree)]), i, a, b)
        # odometer, last slot fastest
        k = nfree - 1
        while k >= 0:
            env[k] += 1
            if env[k] <= his[k]:
                break
            env[k] = los[k]
            k -= 1
        if k < 0:
            return count, None


def rref(rows):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t ncols = len(rows[0]) if nrows else 0
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list m = [list(x) for x in rows]
    cdef list row, row_r
    prev = 1
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = -1
        for i in range(r, nrows):
            if m[i][c] != 0:
                p = i
                break
        if p < 0:
            continue
        m[r], m[p] = m[p], m[r]
        row_r = m[r]
        piv = row_r[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[c]
            if a == 0:
                if piv != prev:
                    for j in range(ncols):
                        row[j] = (piv * row[j]) // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - a * row_r[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    if not pivots:
        return [], [], 1
    return m[:r], pivots, m[r - 1][pivots[r - 1]]


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    v = [x // g for x in v]
    for x in v:
        if x:
            return [-y for y in v] if x < 0 else v
    return v


def nullspace(rows, ncols):
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
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


def circuits(m, ncols, max_size=3):
    cdef Py_ssize_t nr = len(m)
    cdef Py_ssize_t i, k
    cols = [tuple(row[j] for row in m) for j in range(ncols)]
    nonzero = [j for j in range(ncols) if any(cols[j])]
    out = []
    for j in range(ncols):
        if not any(cols[j]):
            v = [0] * ncols
            v[j] = 1
            out.append(v)
    dep2 = set()
    for a, b in itertools.combinations(nonzero, 2):
        ca, cb = cols[a], cols[b]
        dep = True
        for i in range(nr):
            for k in range(i + 1, nr):
                if ca[i] * cb[k] != cb[i] * ca[k]:
                    dep = False
                    break
            if not dep:
                break
        if dep:
            dep2.add((a, b))
            for i in range(nr):
                if ca[i]:
                    break
            v = [0] * ncols
            v[a], v[b] = cb[i], -ca[i]
            out.append(primitive(v))
    if max_size < 3:
        return out
    for a, b, c in itertools.combinations(nonzero, 3):
        if (a, b) in dep2 or (a, c) in dep2 or (b, c) in dep2:
            continue
        ca, cb, cc = cols[a], cols[b], cols[c]
        vec = None
        ok = True
        for i in range(nr):
            for k in range(i + 1, nr):
                x0 = cb[i] * cc[k] - cc[i] * cb[k]
                x1 = cc[i] * ca[k] - ca[i] * cc[k]
                x2 = ca[i] * cb[k] - cb[i] * ca[k]
                if vec is None:
                    if x0 or x1 or x2:
                        vec = (x0, x1, x2)
                    continue
                if vec[0] * x1 != vec[1] * x0 or vec[0] * x2 != vec[2] * x0 or vec[1] * x2 != vec[2] * x1:
                    ok = False
                    break
            if not ok:
                break
        if not ok or vec is None:
            continue
        if not (vec[0] and vec[1] and vec[2]):
            continue
        good = True
        for i in range(nr):
            if ca[i] * vec[0] + cb[i] * vec[1] + cc[i] * vec[2] != 0:
                good = False
                break
        if not good:
            continue
        v = [0] * ncols
        v[a], v[b], v[c] = vec
        out.append(primitive(v))
    return out
