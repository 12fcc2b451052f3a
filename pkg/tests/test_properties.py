from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from fiblab.dsl import parse, render
from fiblab.evaluator import check_identity, eval_expr
from fiblab.prover import FALSIFIED, PROVEN, QuadRat, prove
from fiblab.sequences import fib, k_fib, lucas
from fiblab.tiling import analyze, generate

ints = st.integers(min_value=-60, max_value=200)


@given(ints)
def test_cassini(n):
    assert fib(n - 1) * fib(n + 1) - fib(n) ** 2 == (-1) ** n


@given(ints, ints)
def test_addition_formula(m, n):
    assert fib(m + n) == fib(m) * fib(n + 1) + fib(m - 1) * fib(n)


@given(st.integers(min_value=0, max_value=300))
def test_lucas_from_fibonacci(n):
    assert lucas(n) == fib(n - 1) + fib(n + 1)


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=80))
def test_k_fib_recurrence(k, n):
    assert k_fib(k, n + 2) == k * k_fib(k, n + 1) + k_fib(k, n)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(rationals, rationals, rationals)
def test_quadrat_field_axioms(a, b, c):
    x, y = QuadRat(a, b), QuadRat(b, c)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    if a or b:
        assert x * x**-1 == QuadRat(1)


# random atoms F[a n + b] with small coefficients
atoms = st.tuples(st.integers(min_value=1, max_value=3), st.integers(min_value=-3, max_value=4))
terms = st.lists(st.tuples(st.integers(min_value=-4, max_value=4).filter(bool), atoms, st.integers(1, 3)), min_size=1, max_size=4)


def _atom(a, b):
    idx = f"{a}n" if a != 1 else "n"
    if b:
        idx += f"{b:+d}"
    return f"F[{idx}]"


def _poly(ts):
    return " + ".join(f"({c})*{_atom(*at)}^{p}" for c, at, p in ts)


def _raised(ts):
    # the same polynomial with one step of the recurrence applied to each atom
    return " + ".join(f"({c})*({_atom(at[0], at[1] + 1)} - {_atom(at[0], at[1] - 1)})^{p}" for c, at, p in ts)


@settings(max_examples=40, deadline=None)
@given(terms)
def test_prover_agrees_with_sweep(ts):
    ident = parse(f"{_poly(ts)} = {_raised(ts)} ; n >= 4")
    (out,) = prove(ident)
    assert out.status == PROVEN
    assert check_identity(ident, sweep=40).ok


@settings(max_examples=40, deadline=None)
@given(terms, st.integers(min_value=1, max_value=9))
def test_perturbed_identity_refuted(ts, bump):
    ident = parse(f"{_poly(ts)} + {bump} = {_raised(ts)} ; n >= 4")
    (out,) = prove(ident)
    assert out.status == FALSIFIED
    n = out.counterexample["assignment"]["n"]
    left, right = (eval_expr(s, {"n": n}) for s in ident.sides)
    assert left != right


@settings(max_examples=40, deadline=None)
@given(terms)
def test_render_parse_round_trip(ts):
    ident = parse(f"{_poly(ts)} = {_raised(ts)} ; n >= 4")
    text = render(ident)
    assert render(parse(text)) == text
    assert check_identity(parse(text), sweep=20).ok


@settings(max_examples=25, deadline=None)
@given(terms, rationals.filter(bool), st.booleans())
def test_scale_invariance(ts, c, true_identity):
    bump = "" if true_identity else " + 1"
    base = parse(f"{_poly(ts)}{bump} = {_raised(ts)} ; n >= 4")
    scaled = parse(f"({c})*({_poly(ts)}{bump}) = ({c})*({_raised(ts)}) ; n >= 4")
    a, b = check_identity(base, sweep=30), check_identity(scaled, sweep=30)
    assert a.status == b.status
    assert a.assignment == b.assignment


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.integers(min_value=2, max_value=20))
def test_spiral_invariants(i, n):
    boxes = generate(i, n)
    rep = analyze(boxes, i)
    assert rep.sides_are_fib
    assert all(isinstance(x, Fraction) for b in boxes for x in b.lo)
    if i == 1:
        assert rep.diagonal_plane
