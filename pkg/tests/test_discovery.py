import time

import pytest

from fiblab.catalog import load
from fiblab.discovery import (
    MAX_BASIS,
    Basis,
    RelationCandidate,
    confirm,
    discover,
    make_basis,
    parse_targets,
    search,
    to_catalog,
)
from fiblab.dsl import parse, parse_expr, render, render_expr
from fiblab.prover import PROVEN, prove, relation_equivalent


def _has(found, text):
    want = parse(text)
    return any(relation_equivalent(ident, want, max_shift=0) for ident, _ in found)


def test_cubes_with_triple_index_target():
    t0 = time.perf_counter()
    found = discover(range(-1, 2), parse_targets("F[3n]"))
    assert time.perf_counter() - t0 < 10
    assert [render(i) for i, _ in found] == ["F[n+1]^3 + F[n]^3 = F[n-1]^3 + F[3n] ; n >= 1"]
    assert found[0][1].status == PROVEN


def test_candidate_coefficients():
    (cand,) = search(range(-1, 2), parse_targets("F[3n]"))
    # basis order: cubes with descending offsets, then the target
    assert render_expr(cand.basis.monomials[0]) == "F[n+1]^3"
    assert cand.coeffs[-1] != 0
    assert sorted(map(abs, cand.coeffs)) == [1, 1, 1, 1]
    assert cand.norm1 == 4


def test_signed_companions():
    found = discover(range(0, 7), parse_targets("sign:0..6"), kinds=("cubes", "distinct"))
    assert _has(found, "F[n+1]*F[n+2]*F[n+6] - F[n+3]^3 = (-1)^n*F[n]")
    assert _has(found, "F[n]*F[n+4]*F[n+5] - F[n+3]^3 = (-1)^(n+1)*F[n+6]")


def test_split_degree_relation():
    found = discover(range(-3, 4), parse_targets("sign:-3..3"), kinds=("split12",))
    assert _has(found, "F[n-3]*F[n+1]^2 - F[n-2]^2*F[n+3] = 4*(-1)^n*F[n] ; n >= 3")


def test_every_discovery_proven():
    found = discover(range(0, 4), parse_targets("F[3n], sign:0..3"), kinds=("cubes",))
    assert found
    for ident, outcome in found:
        assert outcome.status == PROVEN
        assert prove(ident)[0].status == PROVEN


def test_deterministic_output():
    a = [render(i) for i, _ in discover(range(0, 5), parse_targets("sign:0..4"), kinds=("cubes", "distinct"))]
    b = [render(i) for i, _ in discover(range(0, 5), parse_targets("sign:0..4"), kinds=("cubes", "distinct"))]
    assert a == b


def test_basis_rejects_duplicates():
    m = parse_expr("F[n]^3")
    with pytest.raises(ValueError):
        Basis((m, m), 0)


def test_basis_size_limit():
    with pytest.raises(ValueError):
        make_basis(range(0, 12), ("cubes", "distinct", "split12"))
    assert len(make_basis(range(0, 5), ("cubes", "distinct"))) <= MAX_BASIS


def test_too_few_samples():
    with pytest.raises(ValueError):
        search(range(-1, 2), parse_targets("F[3n]"), samples=range(1, 4))


def test_unconfirmed_candidates_dropped():
    # a relation that holds only on the sample rows must not survive proof
    basis = make_basis(range(0, 2), ("cubes",), parse_targets("F[3n]"))
    fake = RelationCandidate((1, -1, 0), basis)
    assert confirm([fake]) == []


def test_parse_targets_forms():
    assert len(parse_targets("sign:0..2")) == 3
    assert len(parse_targets("F3:0..1")) == 2
    assert len(parse_targets("one, F[2n]")) == 2


def test_catalog_output_loads():
    found = discover(range(-1, 2), parse_targets("F[3n]"))
    cat = load(to_catalog(found))
    assert cat.ids() == ["discovered-1"]
    assert cat["discovered-1"].claimed_class == "nonhomogeneous-cubic"
