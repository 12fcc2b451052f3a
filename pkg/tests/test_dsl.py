from fractions import Fraction

import pytest

from fiblab.dsl import (
    DSLSyntaxError,
    ShadowingError,
    SubstitutionError,
    Sum,
    UnboundVariableError,
    expand_umbral,
    parse,
    parse_expr,
    parse_grid,
    render,
    render_expr,
    substitute,
    walk,
)
from fiblab.prover import PROVEN, prove


def test_parse_cubic():
    ident = parse("F[n+1]^3 + F[n]^3 - F[n-1]^3 = F[3n] ; n >= 1")
    assert len(ident.sides) == 2
    (cond,) = ident.conditions
    assert cond.var == "n"
    assert [b.const for b in cond.bounds] == [1]


def test_reflexive_identity():
    ident = parse("F[n] = F[n]")
    assert ident.sides[0] == ident.sides[1]


def test_parse_sum():
    ident = parse("Sum(k,1,n, F[2k]^3) * 4 = (F[2n+1]-1)^2 * (F[2n+1]+2) ; n >= 1")
    sums = [x for side in ident.sides for x in walk(side) if isinstance(x, Sum)]
    assert len(sums) == 1
    assert sums[0].var == "k"


def test_render_collects_powers():
    assert render_expr(parse_expr("F[n]*F[n]")) == "F[n]^2"
    assert render(parse("F[n]*F[n] = F[n]^2")) == "F[n]^2 = F[n]^2 ; n >= 0"


def test_render_canonical_form():
    text = "F[n+2]^3 - 3*F[n]^3 + F[n-2]^3 = 3*F[3n] ; n >= 2"
    assert render(parse(text)) == text


def test_syntax_error_position():
    with pytest.raises(DSLSyntaxError) as err:
        parse("F[n+ = 1")
    assert "line 1, column 6" in str(err.value)


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        parse("F[m] = F[n] ; n >= 0")


def test_shadowed_sum_variable():
    with pytest.raises(ShadowingError):
        parse("Sum(k,0,n,Sum(k,0,k,F[k])) = 1")


def test_substitution_errors(corpus):
    family = corpus["eq-8a"].identity
    with pytest.raises(SubstitutionError, match="missing binding"):
        substitute(family, {"k": 2})
    with pytest.raises(SubstitutionError, match="outside declared range"):
        substitute(family, {"k": 9, "r": 1, "m": 1})


def test_parse_grid():
    assert parse_grid("k:1..3, m:0..4") == {"k": range(1, 4), "m": range(0, 5)}
    with pytest.raises(SubstitutionError):
        parse_grid("k=1..3")


@pytest.mark.parametrize(
    "p, variant, text",
    [
        (1, "plus", "F[n+2] = F[n+1] + F[n]"),
        (1, "minus", "F[n-1] = F[n+1] - F[n]"),
        (2, "plus", "F[n+4] = F[n+2] + 2*F[n+1] + F[n]"),
    ],
)
def test_umbral_expansion(p, variant, text):
    ident = expand_umbral(p, variant)
    assert render(ident).split(" ; ")[0] == text
    assert prove(ident)[0].status == PROVEN


def test_umbral_rejects_bad_input():
    with pytest.raises(ValueError):
        expand_umbral(0)
    with pytest.raises(ValueError):
        expand_umbral(2, "times")


def test_constants_are_exact():
    ident = parse("1/2*F[n] + 1/2*F[n] = F[n]")
    assert prove(ident)[0].status == PROVEN
    consts = [x.value for x in walk(ident.sides[0]) if hasattr(x, "value")]
    assert all(isinstance(c, Fraction) for c in consts)
