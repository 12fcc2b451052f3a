import random

import pytest

from fiblab import _pykernels, kernels
from fiblab.discovery import _matrix, make_basis, parse_targets
from fiblab.dsl import parse
from fiblab.evaluator import check_identity

ck = pytest.importorskip("fiblab._ckernels")

NAMES = ("sweep", "rref", "nullspace", "circuits", "primitive")


@pytest.fixture
def use(monkeypatch):
    def _use(impl):
        for n in NAMES:
            monkeypatch.setattr(kernels, n, getattr(impl, n))

    return _use


def test_compiled_is_default():
    assert kernels.IMPLEMENTATION in ("cython", "python")
    assert ck.IMPLEMENTATION == "cython"


@pytest.mark.parametrize(
    "text, sweep",
    [
        ("F[r+s+t] = F[r+1]*F[s+1]*F[t+1] + F[r]*F[s]*F[t] - F[r-1]*F[s-1]*F[t-1] ; r>=1, s>=1, t>=1", 12),
        ("Sum(k,0,n,(-1)^k*C(n,k)*F[k]) = -F[n]", 60),
        ("F[n+1]^3 + F[n]^3 - F[n-1]^3 = F[3n+1] ; n >= 1", 50),
        ("Sum(j,k,n,F[j]) = F[n+2] - F[k+1] ; k >= 0, n >= k", 30),
        ("1/2*F[n] + 1/2*F[n] = F[n]^1", 40),
    ],
)
def test_sweeps_agree(use, text, sweep):
    ident = parse(text)
    use(_pykernels)
    a = check_identity(ident, sweep=sweep).to_dict()
    use(ck)
    b = check_identity(ident, sweep=sweep).to_dict()
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_elimination_agrees():
    basis = make_basis(range(0, 6), ("cubes", "distinct"), parse_targets("sign:0..5"))
    rows = _matrix(basis, range(0, len(basis) + 5))
    assert ck.rref(rows) == _pykernels.rref(rows)
    assert ck.nullspace(rows, len(basis)) == _pykernels.nullspace(rows, len(basis))
    m = ck.rref(rows)[0]
    assert ck.circuits(m, len(basis)) == _pykernels.circuits(m, len(basis))


def test_random_matrices_agree():
    rng = random.Random(7)
    for _ in range(200):
        r, c = rng.randint(1, 7), rng.randint(1, 8)
        rows = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
        assert ck.rref(rows) == _pykernels.rref(rows)
        assert ck.nullspace(rows, c) == _pykernels.nullspace(rows, c)
        for v in _pykernels.nullspace(rows, c):
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)


def test_empty_inputs():
    assert ck.rref([]) == _pykernels.rref([]) == ([], [], 1)
    assert ck.rref([[0, 0]]) == _pykernels.rref([[0, 0]])
    assert ck.primitive([0, -4, 6]) == _pykernels.primitive([0, -4, 6]) == [0, 2, -3]


def test_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, FIBLAB_PURE_PYTHON="1")
    code = "from fiblab import kernels; print(kernels.IMPLEMENTATION)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
