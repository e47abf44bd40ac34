from __future__ import annotations

import itertools
import random
from fractions import Fraction

from spforge.cyclotomic import cyc, zeta
from spforge.linalg import (
    Echelon,
    determinant,
    intersect,
    left_nullspace,
    nullspace,
    rank,
    solve,
    span,
)


def dot(row, v):
    total = cyc(0)
    for i, c in row.items():
        if i in v:
            total = total + c * v[i]
    return total


def leibniz(m):
    n = len(m)
    total = cyc(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i) if perm[j] > perm[i])
        term = cyc(-1 if inversions % 2 else 1)
        for i in range(n):
            term = term * m[i][perm[i]]
        total = total + term
    return total


def random_rows(rng, nrows, ncols, cyclotomic=False):
    rows = []
    for _ in range(nrows):
        row = {}
        for c in range(ncols):
            if rng.random() < 0.4:
                x = cyc(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
                if cyclotomic and rng.random() < 0.3:
                    x = x * zeta(3)
                if not x.is_zero():
                    row[c] = x
        rows.append(row)
    return rows


def test_rank_and_nullspace_small():
    rows = [{0: cyc(1), 1: cyc(2)}, {0: cyc(2), 1: cyc(4)}, {2: zeta(3)}]
    assert rank(rows) == 2
    ker = nullspace(rows, 3)
    assert ker.dim == 1
    (v,) = ker.basis
    assert all(dot(r, v).is_zero() for r in rows)


def test_solve():
    rows = [{0: cyc(1), 1: cyc(1)}, {1: cyc(1)}]
    x = solve(rows, {0: cyc(3), 1: cyc(1)}, 2)
    assert x == {0: cyc(2), 1: cyc(1)}
    assert solve([{0: cyc(1)}, {0: cyc(2)}], {0: cyc(1), 1: cyc(1)}, 1) is None


def test_determinant_against_leibniz():
    rng = random.Random(3)
    for n in range(1, 5):
        for _ in range(5):
            m = [[cyc(rng.randint(-3, 3)) * (zeta(4) if rng.random() < 0.2 else 1) for _ in range(n)]
                 for _ in range(n)]
            assert determinant(m) == leibniz(m)


def test_echelon_tracks_dependencies():
    ech = Echelon(track=True)
    vs = [{0: cyc(1)}, {1: cyc(1)}, {0: cyc(2), 1: cyc(-1)}, {}]
    for v in vs:
        ech.insert(v)
    assert ech.rank == 2
    for dep in ech.dependencies:
        total = {}
        for i, c in dep.items():
            for k, x in vs[i].items():
                total[k] = total.get(k, cyc(0)) + c * x
        assert all(x.is_zero() for x in total.values())
    assert len(ech.dependencies) == 2
    mu = ech.express({0: cyc(3), 1: cyc(1)})
    assert mu is not None


def test_left_nullspace_and_intersection():
    cols = [{0: cyc(1), 1: cyc(1)}, {0: cyc(1)}, {1: cyc(1)}]
    ker = left_nullspace(cols)
    assert ker.dim == 1
    u = span([{0: cyc(1)}, {1: cyc(1)}], 3)
    w = span([{1: cyc(1)}, {2: cyc(1)}], 3)
    both = intersect(u, w)
    assert both.dim == 1 and both.contains({1: cyc(5)})


def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(100):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        rows = random_rows(rng, nrows, ncols, cyclotomic=True)
        ker = nullspace(rows, ncols)
        assert rank(rows) + ker.dim == ncols
        for v in ker.basis:
            assert all(dot(r, v).is_zero() for r in rows)
