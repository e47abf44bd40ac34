from __future__ import annotations

import pytest

from spforge.cyclotomic import cyc, zeta
from spforge.formats import fixture_path, parse_quiver_file
from spforge.groups import (
    CharacterTableError,
    GroupError,
    character_table,
    conjugacy_classes,
    cyclic_group,
    det_twist,
    enumerate_group,
    is_in_sl,
    is_small,
    mckay_quiver,
    preprojective_superpotential,
    pseudo_reflections,
    symplectic_reflections,
)
from spforge.pbw import deformation_space

from helpers import GROUP_FIXTURES, load, load_group

W = zeta(3)
I4 = zeta(4)


def arrows_of(q):
    return sorted((a.name, q.vertices[a.tail], q.vertices[a.head]) for a in q.arrows)


def test_closure_orders():
    assert enumerate_group([[[W, 0], [0, W ** 2]], [[0, 1], [1, 0]]]).order == 6
    assert enumerate_group([[[I4, 0], [0, I4 ** 3]], [[0, 1], [1, 0]]]).order == 8
    assert enumerate_group([[[1, 0], [0, 1]]]).order == 1


def test_closure_bound(monkeypatch):
    with pytest.raises(GroupError):
        enumerate_group([[[2, 0], [0, 1]]], max_order=50)
    monkeypatch.setenv("SPFORGE_MAX_GROUP", "5")
    with pytest.raises(GroupError):
        enumerate_group([[[I4, 0], [0, I4 ** 3]], [[0, 1], [1, 0]]])


def test_singular_generator_rejected():
    with pytest.raises(GroupError):
        enumerate_group([[[1, 0], [0, 0]]])


def test_s3_character_table():
    _, G = load_group("s3.grp")
    T = character_table(G)
    assert T.degrees == [1, 1, 2]
    assert sorted(T.class_sizes) == [1, 2, 3]
    # columns follow the classes; values of the reflection character on a 3-cycle and a transposition
    sizes = T.class_sizes
    rot = sizes.index(2)
    ref = sizes.index(3)
    assert [r[rot] for r in T.rows] == [1, 1, -1]
    assert [r[ref] for r in T.rows] == [1, -1, 0]


def test_cyclic_linear_characters():
    G = cyclic_group(3, 1)
    T = character_table(G)
    assert T.degrees == [1, 1, 1]
    g = G.generators[0]
    col = next(c for c, cls in enumerate(T.classes) if g in cls)
    assert [r[col] for r in T.rows] == [1, W, W ** 2]


def test_d8_degrees():
    _, G = load_group("d8_sl.grp")
    assert character_table(G).degrees == [1, 1, 1, 1, 2]


@pytest.mark.parametrize("name", GROUP_FIXTURES)
def test_orthogonality(name):
    _, G = load_group(name)
    T = character_table(G)
    assert T.verify() == []
    r = len(T.rows)
    for a in range(r):
        for b in range(r):
            assert T.inner(T.rows[a], T.rows[b]) == (1 if a == b else 0)
    # column orthogonality: sum_chi chi(g) conj chi(h) = |C_G(g)| delta
    for c1 in range(r):
        for c2 in range(r):
            total = cyc(0)
            for row in T.rows:
                total = total + row[c1] * row[c2].conjugate()
            expected = G.order // T.class_sizes[c1] if c1 == c2 else 0
            assert total == expected


def test_user_table_is_verified():
    _, G = load_group("s3.grp")
    T = character_table(G)
    again = character_table(G, rows=[list(r) for r in reversed(T.rows)])
    assert again.rows == T.rows
    wrong = [list(r) for r in T.rows]
    wrong[2] = [cyc(2), cyc(1), cyc(0)]
    with pytest.raises(CharacterTableError):
        character_table(G, rows=wrong)


def test_s3_mckay_quiver_matches_fixture():
    spec, G = load_group("s3.grp")
    M = mckay_quiver(G, dual=True, aliases=spec.aliases)
    assert M.multiplicities == [[0, 0, 2], [0, 0, 2], [2, 2, 2]]
    assert arrows_of(M.quiver) == arrows_of(parse_quiver_file(fixture_path("s3_mckay.quiver")))


def test_d8_mckay_quivers():
    spec, G = load_group("d8_sl.grp")
    M = mckay_quiver(G, dual=True)
    assert arrows_of(M.quiver) == [(f"{i}>{j}#{k}", str(i), str(j)) for (i, j, k) in sorted(M.arrow_names)]
    assert [r.count(0) for r in M.multiplicities] == [4, 4, 4, 4, 1]
    spec, G = load_group("d8_gl.grp")
    M = mckay_quiver(G, aliases=spec.aliases)
    assert arrows_of(M.quiver) == arrows_of(load("d8_gl.sp").quiver)


def test_dimension_count_and_symmetry():
    for name in GROUP_FIXTURES:
        spec, G = load_group(name)
        M = mckay_quiver(G, dual=spec.dual)
        dims = M.table.degrees
        dim_v = int(M.representation[0].to_fraction())
        for i, row in enumerate(M.multiplicities):
            assert sum(a * d for a, d in zip(row, dims)) == dim_v * dims[i]
        if spec.dual or is_in_sl(G):
            assert all(M.multiplicities[i][j] == M.multiplicities[j][i]
                       for i in range(len(dims)) for j in range(len(dims)))


@pytest.mark.parametrize("n, q", [(5, 2), (7, 3), (8, 3), (9, 4)])
def test_cyclic_type_quivers(n, q):
    M = mckay_quiver(cyclic_group(n, q))
    for i in range(n):
        targets = sorted(j for j in range(n) for _ in range(M.multiplicities[i][j]))
        assert targets == sorted([(i + 1) % n, (i + q) % n])
        assert M.twist[i] == (i + q + 1) % n


def test_det_twist():
    _, G = load_group("bd8.grp")
    assert det_twist(character_table(G)) == list(range(5))
    _, G = load_group("d8_gl.grp")
    assert mckay_quiver(G).twist == [1, 0, 3, 2, 4]


def test_smallness():
    _, d52 = load_group("d52.grp")
    assert d52.order == 24 and is_small(d52) and not is_in_sl(d52)
    assert len(character_table(d52)) == 15
    _, d8 = load_group("d8_gl.grp")
    assert not is_small(d8)
    _, q8 = load_group("bd8.grp")
    assert is_small(q8) and is_in_sl(q8)


def test_literal_d52_generators_contain_a_pseudo_reflection():
    # the third generator written antidiagonally gives a group of order 48 containing -h
    six = zeta(6)
    G = enumerate_group([[[I4, 0], [0, I4 ** 3]], [[0, I4], [I4, 0]], [[0, six], [six, 0]]])
    assert G.order == 48
    assert not is_small(G)
    assert pseudo_reflections(G)


@pytest.mark.parametrize("name, dual, classes", [("s3.grp", True, 1), ("d8_sl.grp", True, 2), ("z2.grp", False, 1),
                                                 ("bd8.grp", False, 4)])
def test_symplectic_reflections(name, dual, classes):
    _, G = load_group(name)
    rep = symplectic_reflections(G, dual=dual)
    assert rep.count == classes and rep.predicted_dimension == classes + 1


def test_symplectic_reflections_need_even_dimension():
    G = enumerate_group([[[W, 0, 0], [0, 1, 0], [0, 0, 1]]])
    with pytest.raises(GroupError):
        symplectic_reflections(G)


def test_conjugacy_classes_partition():
    _, G = load_group("d52.grp")
    classes = conjugacy_classes(G)
    assert sorted(x for c in classes for x in c) == list(range(G.order))


@pytest.mark.parametrize("name", ["z2.grp", "bd8.grp"])
def test_preprojective_builder(name):
    _, G = load_group(name)
    M = mckay_quiver(G)
    phi = preprojective_superpotential(M)
    assert phi.check().passed
    assert deformation_space(phi, 0).dimension == M.num_vertices
