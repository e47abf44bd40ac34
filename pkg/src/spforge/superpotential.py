"""Superpotentials: validation, cyclic symmetrisation and relation spaces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .cyclotomic import CyclotomicNumber, cyc
from .linalg import Echelon, Subspace, span
from .quiver import Path, PathAlgebraElement, PathBasis, Quiver, left_derivative, path_basis


class SuperpotentialError(ValueError):
    pass


def sign(n: int) -> int:
    """(-1)^(n-1), the sign picked up when an arrow moves across a word."""
    return 1 if n % 2 else -1


@dataclass(frozen=True)
class Twist:
    """A quiver automorphism sigma, given on vertices and on arrows."""

    quiver: Quiver
    vertex_map: tuple[int, ...]
    arrow_map: tuple[int, ...]

    def __post_init__(self):
        q = self.quiver
        if sorted(self.vertex_map) != list(range(q.num_vertices)):
            raise SuperpotentialError("twist is not a permutation of the vertices")
        if sorted(self.arrow_map) != list(range(len(q.arrows))):
            raise SuperpotentialError("twist is not a permutation of the arrows")
        for a, b in enumerate(self.arrow_map):
            src, dst = q.arrows[a], q.arrows[b]
            if dst.tail != self.vertex_map[src.tail] or dst.head != self.vertex_map[src.head]:
                raise SuperpotentialError(
                    f"twist of arrow {src.name} -> {dst.name} does not respect endpoints")
        inv = [0] * len(self.arrow_map)
        for a, b in enumerate(self.arrow_map):
            inv[b] = a
        object.__setattr__(self, "_inverse_arrows", tuple(inv))

    @classmethod
    def identity(cls, quiver: Quiver) -> Twist:
        return cls(quiver, tuple(range(quiver.num_vertices)), tuple(range(len(quiver.arrows))))

    @classmethod
    def from_names(cls, quiver: Quiver, vertices: dict, arrows: dict) -> Twist:
        vmap = list(range(quiver.num_vertices))
        for u, v in vertices.items():
            vmap[quiver.vertex(u)] = quiver.vertex(v)
        amap = list(range(len(quiver.arrows)))
        for a, b in arrows.items():
            amap[quiver.arrow_index(a)] = quiver.arrow_index(b)
        return cls(quiver, tuple(vmap), tuple(amap))

    @property
    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.vertex_map)) and \
            all(i == a for i, a in enumerate(self.arrow_map))

    @property
    def order(self) -> int:
        def cycle_lcm(perm):
            seen, out = set(), 1
            for start in range(len(perm)):
                if start in seen:
                    continue
                length, x = 0, start
                while x not in seen:
                    seen.add(x)
                    x = perm[x]
                    length += 1
                out = math.lcm(out, length)
            return out
        return math.lcm(cycle_lcm(self.vertex_map), cycle_lcm(self.arrow_map))

    def arrow(self, a: int) -> int:
        return self.arrow_map[a]

    def arrow_inverse(self, a: int) -> int:
        return self._inverse_arrows[a]

    def vertex(self, v: int) -> int:
        return self.vertex_map[v]

    def apply_path(self, p: Path) -> Path:
        return Path(tuple(self.arrow_map[a] for a in p.arrows),
                    self.vertex_map[p.head], self.vertex_map[p.tail])


def _support_ok(p: Path, twist: Twist | None) -> bool:
    target = p.tail if twist is None else twist.vertex(p.tail)
    return p.head == target


@dataclass
class ConditionReport:
    passed: bool
    # (a, q, c_{sigma(a) q}, (-1)^(n-1) c_{q a}) for the first failing equation
    witness: tuple | None = None
    support_violations: list[Path] = field(default_factory=list)
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def _split_head(quiver: Quiver, p: Path) -> tuple[int, Path]:
    b = p.arrows[0]
    if len(p) == 1:
        return b, Path((), quiver.arrows[b].tail, quiver.arrows[b].tail)
    rest = p.arrows[1:]
    return b, Path(rest, quiver.arrows[rest[0]].head, p.tail)


def _split_tail(quiver: Quiver, p: Path) -> tuple[Path, int]:
    a = p.arrows[-1]
    if len(p) == 1:
        return Path((), quiver.arrows[a].head, quiver.arrows[a].head), a
    rest = p.arrows[:-1]
    return Path(rest, p.head, quiver.arrows[rest[-1]].tail), a


def _format_witness(quiver: Quiver, n: int, twist, a: int, q: Path, lhs, rhs) -> str:
    name = quiver.arrows[a].name
    head = quiver.arrows[twist.arrow(a)].name if twist else name
    qs = quiver.format_path(q)
    return (f"c[{head}.{qs}] = {lhs} but (-1)^{n - 1} c[{qs}.{name}] = {rhs}")


def check_condition(x: PathAlgebraElement, n: int, twist: Twist | None = None) -> ConditionReport:
    """Check c_{sigma(a) q} = (-1)^(n-1) c_{q a} for every arrow a and path q."""
    quiver = x.quiver
    if twist is not None and twist.is_identity:
        twist = None
    s = sign(n)
    too_long = [p for p in x.support() if len(p) > n]
    if too_long:
        return ConditionReport(False, None, too_long,
                               f"term {quiver.format_path(too_long[0])} is longer than the degree {n}")
    bad_support = [p for p in x.support() if not _support_ok(p, twist)]
    for p in x.support():
        if not p.arrows:
            continue
        # p read as sigma(a) q
        b, q = _split_head(quiver, p)
        a = twist.arrow_inverse(b) if twist else b
        partner = quiver.compose(q, quiver.arrow_path(a))
        lhs = x.coefficient(p)
        rhs = s * x.coefficient(partner) if partner is not None else cyc(0)
        if lhs != rhs:
            return ConditionReport(False, (a, q, lhs, rhs), bad_support,
                                   _format_witness(quiver, n, twist, a, q, lhs, rhs))
        # p read as q a
        q, a = _split_tail(quiver, p)
        head = twist.arrow(a) if twist else a
        partner = quiver.compose(quiver.arrow_path(head), q)
        lhs = x.coefficient(partner) if partner is not None else cyc(0)
        rhs = s * x.coefficient(p)
        if lhs != rhs:
            return ConditionReport(False, (a, q, lhs, rhs), bad_support,
                                   _format_witness(quiver, n, twist, a, q, lhs, rhs))
    if bad_support:
        # unreachable for terms of positive length, kept for trivial paths
        return ConditionReport(False, None, bad_support,
                               f"term {quiver.format_path(bad_support[0])} has the wrong endpoints")
    return ConditionReport(True)


def rotate(quiver: Quiver, p: Path, twist: Twist | None = None) -> Path:
    """T(q a) = sigma(a) q."""
    q, a = _split_tail(quiver, p)
    head = twist.arrow(a) if twist else a
    if q.is_trivial:
        return quiver.arrow_path(head)
    r = quiver.compose(quiver.arrow_path(head), q)
    if r is None:
        raise SuperpotentialError(f"rotation of {quiver.format_path(p)} is not a path")
    return r


def cyclic_symmetrize(seed: PathAlgebraElement, n: int, twist: Twist | None = None) -> PathAlgebraElement:
    """Sum of (-1)^((n-1) r) T^r(w) over n * ord(sigma) rotations of each seed term.

    Coincident rotations are summed, not merged."""
    quiver = seed.quiver
    if twist is not None and twist.is_identity:
        twist = None
    s = sign(n)
    turns = n * (twist.order if twist else 1)
    out: dict[Path, CyclotomicNumber] = {}
    for p, c in seed.terms.items():
        if len(p) != n:
            raise SuperpotentialError(
                f"seed term {quiver.format_path(p)} has length {len(p)}, expected {n}")
        if not _support_ok(p, twist):
            kind = "closed" if twist is None else "twisted-closed"
            raise SuperpotentialError(f"seed term {quiver.format_path(p)} is not {kind}")
        w, coeff = p, c
        for _ in range(turns):
            out[w] = out.get(w, cyc(0)) + coeff
            w = rotate(quiver, w, twist)
            coeff = coeff * s
    return PathAlgebraElement(quiver, out)


@dataclass(frozen=True, eq=False)
class Superpotential:
    element: PathAlgebraElement
    degree: int
    twist: Twist | None = None

    def __post_init__(self):
        if self.twist is not None and self.twist.is_identity:
            object.__setattr__(self, "twist", None)

    @classmethod
    def validated(cls, element: PathAlgebraElement, degree: int, twist: Twist | None = None) -> Superpotential:
        phi = cls(element, degree, twist)
        report = phi.check()
        if not report.passed:
            raise SuperpotentialError(f"not a superpotential of degree {degree}: {report.message}")
        return phi

    @property
    def quiver(self) -> Quiver:
        return self.element.quiver

    @property
    def sign(self) -> int:
        return sign(self.degree)

    @property
    def top(self) -> PathAlgebraElement:
        return self.element.homogeneous_part(self.degree)

    def part(self, m: int) -> PathAlgebraElement:
        return self.element.homogeneous_part(m)

    @property
    def lower(self) -> PathAlgebraElement:
        return self.element - self.top

    @property
    def kind(self) -> str:
        return "homogeneous" if self.element.is_homogeneous(self.degree) else "inhomogeneous"

    @property
    def is_twisted(self) -> bool:
        return self.twist is not None

    def check(self) -> ConditionReport:
        report = check_condition(self.element, self.degree, self.twist)
        if report.passed and self.top.is_zero():
            return ConditionReport(False, None, [], "the degree-n part is zero")
        return report

    def homogeneous(self) -> Superpotential:
        return Superpotential(self.top, self.degree, self.twist)

    def with_lower(self, lower: PathAlgebraElement) -> Superpotential:
        return Superpotential(self.top + lower, self.degree, self.twist)

    def generator_block(self, p: Path) -> tuple[int, int]:
        """(head, tail) of delta_p Phi for a generator path p."""
        tail = p.head if self.twist is None else self.twist.vertex_map.index(p.head)
        return p.tail, tail

    def __eq__(self, other) -> bool:
        if not isinstance(other, Superpotential):
            return NotImplemented
        tw = (lambda t: None if t is None else (t.vertex_map, t.arrow_map))
        return (self.degree == other.degree and self.element == other.element
                and tw(self.twist) == tw(other.twist))

    def __str__(self) -> str:
        return str(self.element)


@dataclass(frozen=True)
class Generator:
    path: Path
    element: PathAlgebraElement

    @property
    def is_zero(self) -> bool:
        return self.element.is_zero()


def relation_generators(phi: Superpotential | PathAlgebraElement, k: int,
                        homogeneous: bool = False) -> list[Generator]:
    """delta_p Phi for every path p of length k, including the zero ones."""
    element = phi.element if isinstance(phi, Superpotential) else phi
    if homogeneous and isinstance(phi, Superpotential):
        element = phi.top
    return [Generator(p, left_derivative(p, element)) for p in element.quiver.enumerate_paths(k)]


@dataclass(eq=False)
class RelationSpace(Subspace):
    """Span of the delta_p Phi_n with |p| = n - j, in length-j path coordinates."""

    coords: PathBasis | None = None
    generators: list[Generator] = field(default_factory=list)

    def element(self, i: int) -> PathAlgebraElement:
        return self.coords.from_vector(self.basis[i])

    def elements(self) -> list[PathAlgebraElement]:
        return [self.coords.from_vector(b) for b in self.basis]

    def contains_element(self, x: PathAlgebraElement) -> bool:
        return self.contains(self.coords.to_vector(x))

    def block_dimensions(self) -> dict[tuple[int, int], int]:
        """dim e R f keyed by (head e, tail f)."""
        blocks: dict[tuple[int, int], Echelon] = {}
        for g in self.generators:
            if g.is_zero:
                continue
            p0 = next(iter(g.element.terms))
            ech = blocks.setdefault((p0.head, p0.tail), Echelon())
            ech.insert(self.coords.to_vector(g.element))
        return {key: e.rank for key, e in sorted(blocks.items())}


def relation_space(phi: Superpotential, j: int) -> RelationSpace:
    n = phi.degree
    if not 0 <= j <= n:
        raise ValueError(f"degree {j} outside 0..{n}")
    gens = relation_generators(phi, n - j, homogeneous=True)
    coords = path_basis(phi.quiver, j)
    sub = span([coords.to_vector(g.element) for g in gens], len(coords))
    return RelationSpace(sub.ambient, sub.basis, sub.pivots, coords, gens)


def check_blocks(phi: Superpotential, gens: Sequence[Generator]) -> list[Path]:
    """Generators whose derivative is not supported in a single (head, tail) block."""
    bad = []
    for g in gens:
        blocks = {(p.head, p.tail) for p in g.element.terms}
        if len(blocks) > 1 or (blocks and blocks != {phi.generator_block(g.path)}):
            bad.append(g.path)
    return bad
