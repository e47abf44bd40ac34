"""Shared loaders and random instance generators for the tests."""

from __future__ import annotations

import random
from functools import lru_cache

from spforge.cyclotomic import cyc, zeta
from spforge.formats import fixture_path, parse_group_file, parse_superpotential_file
from spforge.groups import enumerate_group
from spforge.quiver import PathAlgebraElement, Quiver
from spforge.superpotential import Superpotential, cyclic_symmetrize

SUPERPOTENTIAL_FIXTURES = ["weyl.sp", "phi3.sp", "s3_phi4.sp", "d8_phi4.sp", "preprojective_z2.sp",
                           "d8_gl.sp", "d52.sp"]
GROUP_FIXTURES = ["s3.grp", "d8_sl.grp", "d8_gl.grp", "d52.grp", "z2.grp", "bd8.grp"]


@lru_cache(maxsize=None)
def load(name: str) -> Superpotential:
    return parse_superpotential_file(fixture_path(name))


@lru_cache(maxsize=None)
def load_group(name: str, **values):
    spec = parse_group_file(fixture_path(name), {k: str(v) for k, v in values.items()} or None)
    return spec, enumerate_group(spec.generators, field_order=spec.order)


def random_scalar(rng: random.Random, cyclotomic: bool = False):
    c = cyc(rng.choice([-3, -2, -1, 1, 2, 3]))
    if cyclotomic and rng.random() < 0.3:
        c = c * zeta(rng.choice([3, 4]), rng.randrange(1, 3))
    return c


def random_quiver(rng: random.Random, max_vertices: int = 2, max_arrows: int = 4) -> Quiver:
    nv = rng.randint(1, max_vertices)
    arrows = []
    for i in range(rng.randint(1, max_arrows)):
        arrows.append((f"x{i}", str(rng.randrange(nv)), str(rng.randrange(nv))))
    if nv > 1:
        # make sure some cycle through several vertices exists
        arrows.append(("u", "0", "1"))
        arrows.append(("w", "1", "0"))
    return Quiver([str(v) for v in range(nv)], arrows)


def random_superpotential(rng: random.Random, n: int | None = None, cyclotomic: bool = False) -> Superpotential:
    """Cyclic symmetrization of a few random closed paths; retried until nonzero."""
    while True:
        q = random_quiver(rng)
        deg = n or rng.randint(2, 4)
        closed = [p for p in q.enumerate_paths(deg) if p.is_closed]
        if not closed:
            continue
        seed = PathAlgebraElement.zero(q)
        for p in rng.sample(closed, min(len(closed), rng.randint(1, 3))):
            seed = seed + PathAlgebraElement.from_path(q, p, random_scalar(rng, cyclotomic))
        top = cyclic_symmetrize(seed, deg)
        if not top.is_zero():
            return Superpotential(top, deg)
