import json
from fractions import Fraction as F

import pytest

from fiblab.sequences import fib
from fiblab.tiling import MAPS, Cuboid, affine_step, analyze, export, generate, load_json

PHI2 = (3 + 5**0.5) / 2


def _diag(*xs):
    return tuple(tuple(F(x) if i == j else F(0) for j in range(3)) for i, x in enumerate(xs))


def test_affine_steps():
    s = affine_step(1, 1)
    assert s.matrix == _diag(1, 1, -1) and s.offset == (0, 0, 0)
    s = affine_step(1, 2)
    assert s.matrix == _diag(-2, -2, 2) and s.offset == (3, 3, -1)
    s = affine_step(2, 3)
    h = F(3, 2)
    assert s.matrix == ((0, -h, 0), (0, 0, h), (-h, 0, 0))
    assert s.offset == (h, -h, h)


def test_affine_step_errors():
    with pytest.raises(ValueError):
        affine_step(4, 1)
    with pytest.raises(ValueError):
        affine_step(1, 0)


@pytest.mark.parametrize("i", MAPS)
def test_similarity_matrices(i):
    for n in range(1, 41):
        s = affine_step(i, n)
        r = F(fib(n + 1), fib(n))
        assert s.gram() == _diag(r * r, r * r, r * r)
        assert abs(s.det()) == r**3


def test_first_boxes():
    boxes = generate(1, 3)
    assert [(b.lo, b.hi) for b in boxes] == [
        ((0, 0, 0), (1, 1, 1)),
        ((0, 0, -1), (1, 1, 0)),
        ((1, 1, -3), (3, 3, -1)),
    ]
    assert all(isinstance(x, F) for b in boxes for x in b.lo + b.hi)


@pytest.mark.parametrize("i", MAPS)
def test_sides_are_fibonacci(i):
    boxes = generate(i, 25)
    assert [b.side for b in boxes] == [fib(n) for n in range(1, 26)]
    assert [b.n for b in boxes] == list(range(1, 26))


def test_map1_centers():
    centers = [b.center for b in generate(1, 5)]
    h = F(1, 2)
    assert centers == [(h, h, h), (h, h, -h), (2, 2, -2), (3, 3, 3), (F(-7, 3), F(-7, 3), F(13, 3))]
    rep = analyze(generate(1, 5), 1)
    assert rep.coplanar and rep.diagonal_plane and rep.disjoint


@pytest.mark.parametrize("i", MAPS)
def test_disjoint_at_fifteen(i):
    rep = analyze(generate(i, 15), i)
    assert rep.disjoint and rep.overlap is None
    assert rep.sides_are_fib


@pytest.mark.parametrize("i", MAPS)
def test_ratio_tends_to_phi_squared(i):
    rep = analyze(generate(i, 60), i)
    assert abs(rep.ratios[-1] - PHI2) < 1e-4


def test_overlap_detected():
    a = Cuboid(1, (F(0),) * 3, (F(2),) * 3)
    b = Cuboid(2, (F(1),) * 3, (F(3),) * 3)
    c = Cuboid(3, (F(2), F(0), F(0)), (F(3), F(1), F(1)))
    rep = analyze([a, b, c], 1)
    assert not rep.disjoint and rep.overlap == (1, 2)
    # sharing a face is not an overlap
    assert not a.interiors_overlap(c)


def test_single_box():
    rep = analyze(generate(2, 1), 2)
    assert rep.disjoint and rep.ratios == []


def test_degenerate_box_rejected():
    with pytest.raises(ValueError):
        Cuboid(1, (F(0),) * 3, (F(0), F(1), F(1)))


def test_json_export():
    (rec,) = json.loads(export(generate(1, 1), "json"))
    assert rec["n"] == 1
    assert rec["min"] == ["0/1", "0/1", "0/1"] and rec["max"] == ["1/1", "1/1", "1/1"]
    assert rec["min_f"] == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("i", MAPS)
def test_json_round_trip(i):
    boxes = generate(i, 20)
    assert load_json(export(boxes, "json")) == boxes


def test_obj_export():
    text = export(generate(1, 2), "obj").decode()
    lines = text.splitlines()
    assert sum(ln.startswith("v ") for ln in lines) == 16
    assert sum(ln.startswith("f ") for ln in lines) == 12
    assert [ln for ln in lines if ln.startswith("g ")] == ["g cube_1", "g cube_2"]
    faces = [list(map(int, ln.split()[1:])) for ln in lines if ln.startswith("f ")]
    assert all(len(f) == 4 for f in faces) and max(map(max, faces)) == 16


def test_obj_precision():
    text = export(generate(1, 5), "obj").decode()
    # C_5 spans z in [11/6, 41/6]
    assert "6.83333333333" in text and "6.833333333333" not in text


def test_unknown_format():
    with pytest.raises(ValueError):
        export(generate(1, 2), "stl")
