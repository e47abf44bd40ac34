"""Randomized identities, each over every fixture plus 100 random instances."""

from __future__ import annotations

import random

from spforge.cyclotomic import cyc, zeta
from spforge.groups import character_table, cyclic_group, enumerate_group
from spforge.linalg import nullspace, rank
from spforge.pbw import deformation_space, superpotential_from_theta, theta_from_superpotential
from spforge.quiver import PathAlgebraElement, left_derivative, multiply, right_derivative

from helpers import GROUP_FIXTURES, SUPERPOTENTIAL_FIXTURES, load, load_group, random_scalar, random_superpotential

RANDOM_CASES = 100


def derivative_identity_failures(phi) -> list[str]:
    """delta_{sigma(b)} Phi = (-1)^(n-1) Phi delta'_b on the top part."""
    q = phi.quiver
    top = phi.top
    bad = []
    for b in range(len(q.arrows)):
        lead = b if phi.twist is None else phi.twist.arrow(b)
        lhs = left_derivative(q.arrow_path(lead), top)
        rhs = right_derivative(q.arrow_path(b), top) * phi.sign
        if lhs != rhs:
            bad.append(q.arrows[b].name)
    return bad


def resummation_failures(phi) -> list[str]:
    """sum_a a delta_a delta_p Phi = delta_p Phi for every path with |p| < n."""
    q = phi.quiver
    top = phi.top
    bad = []
    for length in range(phi.degree):
        for p in q.enumerate_paths(length):
            x = left_derivative(p, top)
            total = PathAlgebraElement.zero(q)
            for a in range(len(q.arrows)):
                ap = q.arrow_path(a)
                total = total + multiply(PathAlgebraElement.from_path(q, ap), left_derivative(ap, x))
            if total != x:
                bad.append(q.format_path(p))
    return bad


def theta_round_trip_ok(phi, k: int, rng: random.Random | None = None) -> bool:
    """G(F(x)) = x for x = phi plus a combination of coherent lower terms."""
    D = deformation_space(phi.homogeneous(), k)
    targets = [phi.homogeneous()] + D.basis_superpotentials()
    if rng is not None and D.dimension:
        v = {i: random_scalar(rng) for i in range(D.dimension) if rng.random() < 0.7}
        targets.append(D.superpotential(_combine(D, v)))
    for x in targets:
        back, report = superpotential_from_theta(theta_from_superpotential(x, k))
        if not report.passed or back != x:
            return False
    return True


def _combine(D, weights):
    out = {}
    for i, w in weights.items():
        for j, c in D.solution.basis[i].items():
            out[j] = out.get(j, cyc(0)) + c * w
    return {j: c for j, c in out.items() if not c.is_zero()}


def orthogonality_failures(G) -> list[str]:
    T = character_table(G)
    bad = list(T.verify())
    r = len(T.rows)
    for a in range(r):
        for b in range(r):
            if T.inner(T.rows[a], T.rows[b]) != (1 if a == b else 0):
                bad.append(f"rows {a}, {b}")
    for c1 in range(r):
        for c2 in range(r):
            total = cyc(0)
            for row in T.rows:
                total = total + row[c1] * row[c2].conjugate()
            if total != (G.order // T.class_sizes[c1] if c1 == c2 else 0):
                bad.append(f"columns {c1}, {c2}")
    return bad


def random_group(rng: random.Random):
    kind = rng.choice(["cyclic", "dihedral", "binary dihedral"])
    if kind == "cyclic":
        n = rng.randint(2, 12)
        return cyclic_group(n, rng.randrange(1, n))
    m = rng.randint(2, 7)
    if kind == "dihedral":
        z = zeta(m)
        return enumerate_group([[[z, 0], [0, z ** (m - 1)]], [[0, 1], [1, 0]]])
    z = zeta(2 * m)
    return enumerate_group([[[z, 0], [0, z ** (2 * m - 1)]], [[0, 1], [-1, 0]]])


def rank_nullity_ok(rng: random.Random) -> bool:
    nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
    rows = []
    for _ in range(nrows):
        v = {}
        for j in range(ncols):
            if rng.random() < 0.5:
                v[j] = random_scalar(rng, cyclotomic=True)
        rows.append(v)
    if rng.random() < 0.5 and nrows > 1:
        # force a dependency
        w = random_scalar(rng)
        rows[-1] = {j: c * w for j, c in rows[0].items()}
    ker = nullspace(rows, ncols)
    if rank(rows) + ker.dim != ncols:
        return False
    for v in ker.basis:
        for r in rows:
            s = cyc(0)
            for j, c in r.items():
                if j in v:
                    s = s + c * v[j]
            if not s.is_zero():
                return False
    return True


def random_superpotentials(seed: int = 11) -> list:
    rng = random.Random(seed)
    return [random_superpotential(rng, cyclotomic=True) for _ in range(RANDOM_CASES)]


def test_derivative_identity():
    for name in SUPERPOTENTIAL_FIXTURES:
        assert derivative_identity_failures(load(name)) == [], name
    for phi in random_superpotentials():
        assert derivative_identity_failures(phi) == [], str(phi)


def test_resummation_identity():
    for name in SUPERPOTENTIAL_FIXTURES:
        assert resummation_failures(load(name)) == [], name
    for phi in random_superpotentials():
        assert resummation_failures(phi) == [], str(phi)


def test_theta_round_trips():
    for name in ["phi3.sp", "s3_phi4.sp", "d8_phi4.sp", "preprojective_z2.sp"]:
        phi = load(name)
        assert theta_round_trip_ok(phi, phi.degree - 2), name
    rng = random.Random(5)
    for phi in random_superpotentials(seed=17):
        assert theta_round_trip_ok(phi, phi.degree - 2, rng), str(phi)


def test_character_orthogonality():
    for name in GROUP_FIXTURES:
        assert orthogonality_failures(load_group(name)[1]) == [], name
    rng = random.Random(3)
    for _ in range(RANDOM_CASES):
        G = random_group(rng)
        assert orthogonality_failures(G) == [], G.order


def test_rank_nullity():
    rng = random.Random(23)
    for _ in range(RANDOM_CASES):
        assert rank_nullity_ok(rng)
