import pytest

from fiblab.sequences import fib, gen_fib, k_fib, lucas, recurrence


def test_fib_anchors():
    assert fib(0) == 0
    assert fib(1) == 1
    assert fib(14) == 377
    assert fib(15) == 610


def test_fib_negative_index():
    assert fib(-4) == -3
    # the recurrence holds across zero
    for n in range(-30, 30):
        assert fib(n + 2) == fib(n + 1) + fib(n)
        assert fib(-n) == (-1) ** (n + 1) * fib(n)


def test_memo_and_direct_agree():
    for n in range(-40, 200, 7):
        assert fib(n, memo=False) == fib(n)
    for n in range(0, 100, 9):
        assert lucas(n, memo=False) == lucas(n)
        assert k_fib(3, n, memo=False) == k_fib(3, n)
        assert gen_fib(2, 7, n, memo=False) == gen_fib(2, 7, n)


def test_lucas():
    assert lucas(0) == 2
    assert lucas(1) == 1
    assert lucas(10) == 123
    with pytest.raises(ValueError):
        lucas(-1)


def test_k_fib():
    assert [k_fib(2, n) for n in range(6)] == [0, 1, 2, 5, 12, 29]
    assert k_fib(3, 0) == 0
    assert all(k_fib(1, n) == fib(n) for n in range(60))
    with pytest.raises(ValueError):
        k_fib(0, 3)
    with pytest.raises(ValueError):
        k_fib(-2, 3)


def test_gen_fib():
    assert gen_fib(0, 1, 10) == 55
    assert gen_fib(2, 1, 4) == 7
    assert gen_fib(5, 5, 0) == 5
    assert all(gen_fib(2, 1, n) == lucas(n) for n in range(40))


def test_large_index_is_exact():
    n = 1000
    assert fib(n + 1) * fib(n - 1) - fib(n) ** 2 == 1
    assert recurrence()[n] == fib(n)
