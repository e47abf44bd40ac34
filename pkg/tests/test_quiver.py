from __future__ import annotations

import random

import pytest

from spforge.cyclotomic import cyc
from spforge.quiver import (
    PathAlgebraElement,
    Quiver,
    left_derivative,
    multiply,
    parse_element,
    path_basis,
    right_derivative,
)

from helpers import random_quiver


@pytest.fixture
def q():
    return Quiver(["u", "v"], [("a", "u", "v"), ("b", "v", "u"), ("l", "v", "v")])


def test_paths_are_head_first(q):
    p = q.path("l", "a")  # a then l
    assert (q.vertices[p.tail], q.vertices[p.head]) == ("u", "v")
    assert q.compose(q.path("a"), q.path("l")) is None
    assert q.compose(q.path("b"), q.path("a")).is_closed
    with pytest.raises(ValueError):
        q.path("a", "l")


def test_enumerate_paths_counts_match_adjacency_powers():
    rng = random.Random(5)
    for _ in range(20):
        qq = random_quiver(rng, 3, 5)
        n = qq.num_vertices
        adj = [[qq.arrow_count(i, j) for j in range(n)] for i in range(n)]
        power = [[int(i == j) for j in range(n)] for i in range(n)]
        for length in range(4):
            total = sum(sum(r) for r in power)
            assert len(qq.enumerate_paths(length)) == total
            for i in range(n):
                for j in range(n):
                    assert len(qq.enumerate_paths(length, tail=i, head=j)) == power[i][j]
            power = [[sum(power[i][k] * adj[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def test_multiplication_is_concatenation(q):
    x = parse_element(q, "a + 2*b")
    y = parse_element(q, "b - e(v)")
    # a e(v) and b b vanish; b e(v) = b
    assert multiply(x, y) == parse_element(q, "a.b - 2*b")
    one = PathAlgebraElement.one(q)
    assert multiply(one, x) == x == multiply(x, one)


def test_associativity_random(q):
    rng = random.Random(2)
    paths = [p for m in range(3) for p in q.enumerate_paths(m)]

    def rand():
        return PathAlgebraElement(q, {p: cyc(rng.randint(-2, 2)) for p in rng.sample(paths, 4)})

    for _ in range(30):
        x, y, z = rand(), rand(), rand()
        assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
        assert multiply(x, y + z) == multiply(x, y) + multiply(x, z)


def test_derivatives(q):
    x = parse_element(q, "l.l.a + 3*a.b.l - l")
    assert left_derivative(q.path("l"), x) == parse_element(q, "l.a - e(v)")
    assert left_derivative(q.path("l", "l"), x) == parse_element(q, "a")
    assert right_derivative(q.path("l"), x) == parse_element(q, "3*a.b - e(v)")
    assert left_derivative(q.trivial("v"), x) == x  # every term ends at v
    assert left_derivative(q.trivial("u"), x).is_zero()
    assert right_derivative(q.trivial("u"), x) == parse_element(q, "l.l.a")


def test_derivative_definition_brute_force():
    rng = random.Random(11)
    for _ in range(20):
        qq = random_quiver(rng, 2, 3)
        words = qq.enumerate_paths(3)
        if not words:
            continue
        x = PathAlgebraElement(qq, {w: cyc(rng.randint(1, 5)) for w in rng.sample(words, min(5, len(words)))})
        for p in qq.enumerate_paths(1) + qq.enumerate_paths(2):
            # delta_p x = sum over t of c_{pt} t
            expected = PathAlgebraElement.zero(qq)
            for t in qq.enumerate_paths(3 - len(p)):
                pt = qq.compose(p, t)
                if pt is not None:
                    expected = expected + PathAlgebraElement.from_path(qq, t, x.coefficient(pt))
            assert left_derivative(p, x) == expected


def test_format_and_parse_round_trip(q):
    x = parse_element(q, "1/2*l.a - (z(3))*b.l + e(u) - 7*a.b")
    assert parse_element(q, str(x)) == x


def test_path_basis(q):
    basis = path_basis(q, 2)
    x = parse_element(q, "a.b - 2*l.l")
    assert basis.from_vector(basis.to_vector(x)) == x


def test_reserved_and_duplicate_names():
    with pytest.raises(ValueError):
        Quiver(["v"], [("e", "v", "v")])
    with pytest.raises(ValueError):
        Quiver(["v"], [("x", "v", "v"), ("x", "v", "v")])
