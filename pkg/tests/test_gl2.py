from __future__ import annotations

import math

import pytest

from spforge.gl2 import (
    RelationProfile,
    check_twist_distance,
    hom_dimensions,
    obstruction_report,
    vertex_distance,
)
from spforge.groups import cyclic_group, mckay_quiver
from spforge.pbw import deformation_space
from spforge.quiver import Quiver

from helpers import load, load_group


def test_vertex_distance():
    q = Quiver(3, [("a", 0, 1), ("b", 1, 2)])
    assert vertex_distance(q, 0, 0) == 0
    assert vertex_distance(q, 0, 2) == 2
    assert vertex_distance(q, 2, 0) == math.inf


@pytest.mark.parametrize("n, q", [(5, 2), (7, 3), (7, 2)])
def test_cyclic_distances(n, q):
    M = mckay_quiver(cyclic_group(n, q))
    for i in range(n):
        assert vertex_distance(M.quiver, i, (i + 1) % n) == 1
        assert vertex_distance(M.quiver, i, (i + q + 1) % n) == 2
    assert check_twist_distance(M).passed


def test_sl_twist_distance_fails():
    _, G = load_group("bd8.grp")
    rep = check_twist_distance(mckay_quiver(G))
    assert not rep.passed
    assert all(d == 0 for _, _, d in rep.violations)


def test_d52_from_group():
    _, G = load_group("d52.grp")
    M = mckay_quiver(G)
    rep = obstruction_report(RelationProfile.from_mckay(M), M.quiver, M)
    assert (rep.hom_v, rep.hom_s) == (0, 0)
    assert all(d == 2 for _, _, d in rep.relations)
    assert rep.twist_distance.passed
    assert rep.verdict == "no nontrivial PBW deformations"
    # column structure: twelve linear characters with one arrow in and out, three of degree two
    degrees = M.table.degrees
    for v, d in enumerate(degrees):
        outs = len(M.quiver.out_arrows(v))
        ins = len(M.quiver.in_arrows(v))
        assert (outs, ins) == ((1, 1) if d == 1 else (4, 4))


def test_d52_fixture_agrees_with_group():
    phi = load("d52.sp")
    prof = RelationProfile.from_superpotential(phi)
    assert hom_dimensions(prof, phi.quiver) == (0, 0)
    assert all(vertex_distance(phi.quiver, t, h) == 2 for t, h in prof.relations)
    assert deformation_space(phi, 0).dimension == 0
    assert sorted(prof.blocks.values()) == [1] * 15


def test_d8_gl():
    phi = load("d8_gl.sp")
    prof = RelationProfile.from_superpotential(phi)
    assert hom_dimensions(prof, phi.quiver) == (0, 1)
    # the only loop is the central relation at vertex 4
    assert [k for k in prof.blocks if k[0] == k[1]] == [(4, 4)]
    assert deformation_space(phi, 0).dimension == 1
    spec, G = load_group("d8_gl.grp")
    M = mckay_quiver(G, aliases=spec.aliases)
    assert RelationProfile.from_mckay(M).blocks == prof.blocks


def test_preprojective_z2():
    phi = load("preprojective_z2.sp")
    prof = RelationProfile.from_superpotential(phi)
    assert hom_dimensions(prof, phi.quiver) == (0, 2)
    assert deformation_space(phi, 0).dimension == 2


def test_hom_dimensions_count_arrows_in_block():
    # a relation from u to v next to two arrows u -> v contributes twice to Hom(R, V)
    q = Quiver(["u", "v"], [("a", "u", "v"), ("b", "u", "v")])
    prof = RelationProfile(q.vertices, {(1, 0): 1})
    assert hom_dimensions(prof, q) == (2, 0)


def test_twist_distance_implies_vanishing_hom():
    cases = [mckay_quiver(cyclic_group(n, q)) for n, q in [(5, 2), (7, 3), (8, 3), (4, 1), (6, 5)]]
    for name in ["d52.grp", "d8_gl.grp", "z2.grp", "bd8.grp"]:
        spec, G = load_group(name)
        cases.append(mckay_quiver(G))
    seen = 0
    for M in cases:
        rep = obstruction_report(RelationProfile.from_mckay(M), M.quiver, M)
        if rep.twist_distance.passed:
            seen += 1
            assert (rep.hom_v, rep.hom_s) == (0, 0)
    assert seen >= 4
