from fractions import Fraction

import pytest

from fiblab.dsl import parse, parse_expr
from fiblab.evaluator import check_identity
from fiblab.prover import (
    BOUNDED,
    CLOSED,
    FALSIFIED,
    PROVEN,
    SUM_INDUCTION,
    VERIFIED,
    Field,
    LaurentPoly,
    QuadRat,
    UnsupportedError,
    binet_normalize,
    prove,
    relation_equivalent,
    squarefree_split,
)


def _one(text):
    (out,) = prove(parse(text))
    return out


# -- exact arithmetic --------------------------------------------------------


def test_quadrat_field_arithmetic():
    phi = QuadRat(Fraction(1, 2), Fraction(1, 2))
    psi = QuadRat(Fraction(1, 2), Fraction(-1, 2))
    assert phi * phi == phi + 1
    assert phi * psi == QuadRat(-1)
    assert phi ** -1 == -psi
    assert squarefree_split(8) == (2, 2)
    assert squarefree_split(5) == (1, 5)


def test_laurent_poly_basics():
    t = LaurentPoly.monomial(QuadRat(1), (1,))
    inv = LaurentPoly.monomial(QuadRat(1), (-1,))
    assert (t * inv) == LaurentPoly.const(1, 1)
    assert (t - t).is_zero()
    assert len((t + inv) ** 2) == 3


def test_field_for_k():
    f = Field(2)
    assert f.d == 2
    assert f.alpha * f.beta == QuadRat(-1, 0, 2)
    with pytest.raises(UnsupportedError):
        Field(0)


# -- normal forms ------------------------------------------------------------


def test_cassini_normal_form():
    e = parse_expr("F[n]^2 - F[n-1]*F[n+1]")
    assert binet_normalize(e, {"n": 1}) == LaurentPoly.const(-1, 1)
    assert binet_normalize(e, {"n": -1}) == LaurentPoly.const(1, 1)


def test_sign_under_odd_parity():
    assert binet_normalize(parse_expr("(-1)^n"), {"n": -1}) == LaurentPoly.const(-1, 1)


def test_triple_index_two_terms():
    poly = binet_normalize(parse_expr("F[3n]"), {"n": 1})
    assert len(poly) == 2
    inv_sqrt5 = QuadRat(0, Fraction(1, 5))
    assert dict(poly.terms) == {(3,): inv_sqrt5, (-3,): -inv_sqrt5}


def test_mixed_k_unsupported():
    with pytest.raises(UnsupportedError):
        binet_normalize(parse_expr("Fk{2}[n] + Fk{3}[n]"), {"n": 1})


# -- closed forms ------------------------------------------------------------


def test_cassini_proven():
    out = _one("F[n-1]*F[n+1] - F[n]^2 = (-1)^n")
    assert out.status == PROVEN and out.method == CLOSED
    assert all(case.residual.is_zero() for case in out.trace)
    assert len(out.trace) == 2


def test_quintic_recurrence_of_cubes(corpus):
    (out,) = prove(corpus["eq-27"].identity)
    assert out.status == PROVEN


def test_false_identity_falsified():
    out = _one("F[n+1] = F[n]")
    assert out.status == FALSIFIED
    assert out.counterexample["assignment"]["n"] <= 2


def test_k_fibonacci_identity():
    assert _one("Fk{2}[n+2] = 2*Fk{2}[n+1] + Fk{2}[n]").status == PROVEN
    assert _one("Fk{3}[n-1]*Fk{3}[n+1] - Fk{3}[n]^2 = (-1)^n").status == PROVEN


def test_generalized_and_lucas_atoms():
    assert _one("H{2,1}[n] = L[n]").status == PROVEN
    assert _one("L[n] = F[n-1] + F[n+1]").status == PROVEN


def test_multi_index_identity():
    out = _one("F[m+n] = F[m]*F[n+1] + F[m-1]*F[n]")
    assert out.status == PROVEN
    assert len(out.trace) == 4


def test_closed_with_binomial_is_bounded():
    out = _one("Sum(j,0,n,C(n,j)*F[j]) = F[2n]")
    assert out.method == BOUNDED
    assert out.status == VERIFIED


# -- sums --------------------------------------------------------------------


def test_sum_of_fibonacci():
    out = _one("Sum(k,0,n,F[k]) = F[n+2] - 1")
    assert out.status == PROVEN and out.method == SUM_INDUCTION
    assert out.base_cases == [0]


def test_sum_of_cubes(corpus):
    (out,) = prove(corpus["eq-38"].identity)
    assert out.status == PROVEN and out.method == SUM_INDUCTION


def test_mixed_row_sum_form_is_falsified():
    # the odd-start triple product does not match the odd-index right side
    text = "4*Sum(k,1,n,F[2k-1]*F[2k]*F[2k+1]) = F[2n+1]^3 - F[2n+1] ; n >= 1"
    out = _one(text)
    assert out.status == FALSIFIED
    assert out.counterexample["assignment"] == {"n": 1}
    assert check_identity(parse(text)).assignment == {"n": 1}


def test_sum_with_even_step_limit(corpus):
    (out,) = prove(corpus["eq-19"].identity)
    assert out.status == PROVEN


def test_wrong_sum_falsified():
    out = _one("Sum(k,0,n,F[k]) = F[n+2]")
    assert out.status == FALSIFIED


def test_body_depending_on_free_index_is_bounded(corpus):
    outs = prove(corpus["eq-45"].identity)
    assert len(outs) == 16
    assert all(o.method == BOUNDED and o.status == VERIFIED for o in outs)
    assert all(o.verified == {"n": (1, 30)} for o in outs)


# -- families and equivalence -------------------------------------------------


def test_family_instances_proven(corpus):
    outs = prove(corpus["eq-55"].identity)
    assert len(outs) == 16
    assert {(o.binding["l"], o.binding["m"]) for o in outs} == {(a, b) for a in range(1, 5) for b in range(1, 5)}
    assert all(o.status == PROVEN for o in outs)


def test_grid_override(corpus):
    outs = prove(corpus["eq-51"].identity, {"k": range(1, 3)})
    assert [o.binding for o in outs] == [{"k": 1}, {"k": 2}]


def test_relation_equivalence_scale_and_shift():
    a = parse("F[n+1]^3 + F[n]^3 - F[n-1]^3 = F[3n] ; n >= 1")
    b = parse("2*F[n+2]^3 + 2*F[n+1]^3 - 2*F[n]^3 = 2*F[3n+3] ; n >= 0")
    eq = relation_equivalent(a, b)
    assert eq and eq.shift in (1, -1) and abs(eq.scale) in (2, Fraction(1, 2))
    assert not relation_equivalent(a, parse("F[n+1]^3 = F[3n] ; n >= 1"))


def test_outcome_serialization():
    d = _one("F[n+1] = F[n]").to_dict()
    assert d["status"] == FALSIFIED
    assert "counterexample" in d
    d = _one("F[n+2] = F[n+1] + F[n]").to_dict()
    assert all(c["residual_terms"] == 0 for c in d["cases"])
