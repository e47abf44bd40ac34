"""Obstructions to PBW deformations for McKay quivers of subgroups of GL2."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .groups import CharacterTable, McKayQuiver
from .quiver import Quiver
from .superpotential import Superpotential, relation_space


@dataclass
class RelationProfile:
    """Relation blocks e R f, keyed by (head e, tail f)."""

    vertices: list[str]
    blocks: dict[tuple[int, int], int]

    @property
    def relations(self) -> list[tuple[int, int]]:
        """(tail, head) for each block, repeated by its dimension."""
        out = []
        for (h, t), d in sorted(self.blocks.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            out.extend([(t, h)] * d)
        return out

    @property
    def dimension(self) -> int:
        return sum(self.blocks.values())

    @classmethod
    def from_superpotential(cls, phi: Superpotential, k: int = 0) -> RelationProfile:
        R = relation_space(phi, phi.degree - k)
        blocks = {key: d for key, d in R.block_dimensions().items() if d}
        return cls(list(phi.quiver.vertices), blocks)

    @classmethod
    def from_mckay(cls, M: McKayQuiver) -> RelationProfile:
        """Relations of the preprojective-type algebra: Hom(V_i (x) L2 V, V_j) at each (j, i)."""
        table = M.table
        chi = M.representation
        if chi[0] != 2:
            raise ValueError("the relation profile of a McKay quiver needs a two dimensional representation")
        alt = _exterior_square(table, chi)
        blocks = {}
        for i, row in enumerate(table.rows):
            mult = table.decompose([x * y for x, y in zip(row, alt)])
            for j, m in enumerate(mult):
                if m:
                    blocks[(j, i)] = m
        return cls(list(M.quiver.vertices), blocks)


def _exterior_square(table: CharacterTable, chi) -> list:
    """(chi(g)^2 - chi(g^2)) / 2 on each class."""
    G = table.group
    which = {}
    for c, cls in enumerate(table.classes):
        for x in cls:
            which[x] = c
    out = []
    for c, cls in enumerate(table.classes):
        g = cls[0]
        sq = which[G.mul(g, g)]
        out.append((chi[c] * chi[c] - chi[sq]) / 2)
    return out


def vertex_distance(Q: Quiver, i: int, j: int) -> float:
    """Length of a shortest directed path from i to j (math.inf if none)."""
    if i == j:
        return 0
    seen = {i: 0}
    todo = deque([i])
    while todo:
        v = todo.popleft()
        for a in Q.out_arrows(v):
            w = Q.arrows[a].head
            if w not in seen:
                seen[w] = seen[v] + 1
                if w == j:
                    return seen[w]
                todo.append(w)
    return math.inf


def hom_dimensions(profile: RelationProfile, Q: Quiver) -> tuple[int, int]:
    """(dim Hom_{S^e}(R, V), dim Hom_{S^e}(R, S)).

    A bimodule map preserves heads and tails, so the block e R f can only map
    to arrows with the same head e and tail f, or to e_v when e = f = v.
    """
    to_v = 0
    to_s = 0
    for (e, f), d in profile.blocks.items():
        to_v += d * Q.arrow_count(f, e)
        if e == f:
            to_s += d
    return to_v, to_s


@dataclass
class TwistDistanceReport:
    passed: bool
    distances: list[tuple[int, int, float]]  # (i, twist(i), distance)

    @property
    def violations(self) -> list[tuple[int, int, float]]:
        return [x for x in self.distances if x[2] < 2]

    def __bool__(self) -> bool:
        return self.passed


def check_twist_distance(M: McKayQuiver) -> TwistDistanceReport:
    out = [(i, t, vertex_distance(M.quiver, i, t)) for i, t in enumerate(M.twist)]
    return TwistDistanceReport(all(d >= 2 for _, _, d in out), out)


@dataclass
class ObstructionReport:
    profile: RelationProfile
    relations: list[tuple[int, int, float]]  # (tail, head, distance)
    hom_v: int
    hom_s: int
    twist_distance: TwistDistanceReport | None

    @property
    def obstructed(self) -> bool:
        return self.hom_v == 0 and self.hom_s == 0

    @property
    def verdict(self) -> str:
        if self.obstructed:
            return "no nontrivial PBW deformations"
        return f"PBW deformations not excluded: dim Hom(R,V) = {self.hom_v}, dim Hom(R,S) = {self.hom_s}"


def obstruction_report(profile: RelationProfile, Q: Quiver, M: McKayQuiver | None = None) -> ObstructionReport:
    rels = [(t, h, vertex_distance(Q, t, h)) for (t, h) in profile.relations]
    hv, hs = hom_dimensions(profile, Q)
    return ObstructionReport(profile, rels, hv, hs, check_twist_distance(M) if M is not None else None)
