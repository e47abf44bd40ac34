from __future__ import annotations

import pytest

from spforge.quiver import PathAlgebraElement, Quiver, parse_element
from spforge.superpotential import (
    Superpotential,
    SuperpotentialError,
    Twist,
    check_condition,
    cyclic_symmetrize,
    relation_generators,
    relation_space,
    rotate,
)

from helpers import load, load_group


@pytest.fixture
def xy():
    return Quiver(["v"], [("x", "v", "v"), ("y", "v", "v")])


def test_condition_examples(xy):
    assert check_condition(parse_element(xy, "x.y - y.x"), 2).passed
    assert check_condition(parse_element(xy, "x.y.x + x.x.y + y.x.x"), 3).passed
    rep = check_condition(parse_element(xy, "x.y + y.x"), 2)
    assert not rep.passed
    a, q, lhs, rhs = rep.witness
    assert (xy.arrows[a].name, xy.format_path(q)) == ("x", "y")
    assert lhs == 1 and rhs == -1


def test_condition_needs_closed_support():
    q = Quiver(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])
    rep = check_condition(parse_element(q, "a"), 1)
    assert not rep.passed and rep.support_violations


def test_cyclic_symmetrize_examples(xy):
    assert cyclic_symmetrize(parse_element(xy, "x.y"), 2) == parse_element(xy, "x.y - y.x")
    assert cyclic_symmetrize(parse_element(xy, "x.x.y"), 3) == parse_element(xy, "x.x.y + y.x.x + x.y.x")
    # rotations repeat with period two and are summed; the sign (-1)^(3r) alternates
    four = cyclic_symmetrize(parse_element(xy, "x.y.x.y"), 4)
    assert four == parse_element(xy, "2*x.y.x.y - 2*y.x.y.x")
    assert check_condition(four, 4).passed
    assert not check_condition(parse_element(xy, "2*x.y.x.y + 2*y.x.y.x"), 4).passed


def test_cyclic_symmetrize_rejects_bad_seed(xy):
    with pytest.raises(SuperpotentialError):
        cyclic_symmetrize(parse_element(xy, "x.y"), 3)


def test_rotate_moves_the_tail_arrow_to_the_head(xy):
    p = xy.path("x", "x", "y")
    assert rotate(xy, p) == xy.path("y", "x", "x")


def test_weyl_is_inhomogeneous():
    phi = load("weyl.sp")
    assert phi.check().passed
    assert phi.kind == "inhomogeneous"
    gens = relation_generators(phi, 0)
    assert len(gens) == 1
    assert gens[0].element == parse_element(phi.quiver, "x.y - y.x - e(v)")


def test_phi3_relations():
    phi = load("phi3.sp")
    q = phi.quiver
    assert phi.element == parse_element(q, "x.y.x + x.x.y + y.x.x")
    gens = {q.format_path(g.path): g.element for g in relation_generators(phi, 1)}
    assert gens == {"x": parse_element(q, "y.x + x.y"), "y": parse_element(q, "x.x")}


def test_s3_fixture_shape():
    phi = load("s3_phi4.sp")
    q = phi.quiver
    assert q.num_vertices == 3 and len(q.arrows) == 10
    assert phi.check().passed
    gens = {q.format_path(g.path): g.element for g in relation_generators(phi, 2)}
    assert gens["A.a"].is_zero()
    assert gens["A.a'"] == -gens["A'.a"]


def test_twisted_condition():
    phi = load("d8_gl.sp")
    assert phi.is_twisted and phi.check().passed
    assert not Superpotential(phi.element, 2).check().passed
    # swapping one sign breaks the twisted condition
    q = phi.quiver
    broken = phi.element + parse_element(q, "2*D.a")
    assert not check_condition(broken, 2, phi.twist).passed


def test_twist_validation():
    q = Quiver(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])
    with pytest.raises(SuperpotentialError):
        Twist.from_names(q, {"u": "v", "v": "u"}, {})  # a would have to move too
    t = Twist.from_names(q, {"u": "v", "v": "u"}, {"a": "b", "b": "a"})
    assert t.order == 2 and not t.is_identity


@pytest.mark.parametrize("sp, grp", [("s3_phi4.sp", "s3.grp"), ("d8_phi4.sp", "d8_sl.grp")])
def test_relation_space_matches_exterior_square(sp, grp):
    # independent count: dim R = sum_ij dim Hom(V_i (x) L2 V, V_j) for V = h + h*
    from spforge.gl2 import _exterior_square
    from spforge.groups import mckay_quiver
    _, g = load_group(grp)
    M = mckay_quiver(g, dual=True)
    alt = _exterior_square(M.table, M.representation)
    expected = {}
    for i, row in enumerate(M.table.rows):
        for j, m in enumerate(M.table.decompose([x * y for x, y in zip(row, alt)])):
            if m:
                expected[(j, i)] = m
    R = relation_space(load(sp), 2)
    assert R.dim == sum(expected.values())
    assert R.block_dimensions() == expected


def test_zero_top_is_rejected(xy):
    phi = Superpotential(PathAlgebraElement.zero(xy), 2)
    assert not phi.check().passed
