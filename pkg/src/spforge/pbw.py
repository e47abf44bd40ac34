"""PBW and zeroPBW deformations of derivation-quotient algebras.

The algebra D(Phi_n, k) is the path algebra modulo the derivatives delta_p Phi_n
with |p| = k.  Its relation space R sits in length N = n - k.  A deformation
is described by maps theta_j from R to paths of length j (j < N), given on
the generators delta_p Phi_n and extended linearly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cyclotomic import ONE, CyclotomicNumber, cyc
from .linalg import Echelon, Subspace, Vector, add_scaled, intersect, nullspace, span
from .quiver import (Path, PathAlgebraElement, PathBasis, Quiver, left_derivative, multiply,
                     path_basis, right_derivative)
from .superpotential import ConditionReport, Superpotential, SuperpotentialError, sign


class CoherenceError(ValueError):
    pass


class ThetaError(ValueError):
    pass


# generators -----------------------------------------------------------------

class GeneratorSystem:
    """The generators delta_p Phi_n (|p| = k) of R and the linear relations among them."""

    def __init__(self, phi: Superpotential, k: int):
        n = phi.degree
        if not 0 <= k <= n:
            raise ValueError(f"differentiation length {k} outside 0..{n}")
        top = phi.top
        if top.is_zero():
            raise SuperpotentialError("the degree-n part of the superpotential is zero")
        self.phi = phi
        self.k = k
        self.N = n - k
        self.quiver = phi.quiver
        self.paths: list[Path] = self.quiver.enumerate_paths(k)
        self.index = {p: i for i, p in enumerate(self.paths)}
        self.elements = [left_derivative(p, top) for p in self.paths]
        self.coords: PathBasis = path_basis(self.quiver, self.N)
        self.vectors = [self.coords.to_vector(e) for e in self.elements]
        self.echelon = Echelon(track=True)
        for v in self.vectors:
            self.echelon.insert(v)
        # zero generators first: each is its own relation
        deps = list(self.echelon.dependencies)
        deps.sort(key=lambda d: 0 if len(d) == 1 else 1)
        self.relations: list[Vector] = deps

    @classmethod
    def of(cls, phi: Superpotential, k: int) -> GeneratorSystem:
        cache = phi.__dict__.setdefault("_generator_systems", {})
        if k not in cache:
            cache[k] = cls(phi, k)
        return cache[k]

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def nonzero(self) -> list[int]:
        return [i for i, e in enumerate(self.elements) if not e.is_zero()]

    def express(self, x: PathAlgebraElement) -> Vector | None:
        """Coefficients mu with x = sum mu_i delta_{p_i} Phi_n, or None."""
        try:
            v = self.coords.to_vector(x)
        except ValueError:
            return None
        return self.echelon.express(v)

    def relation_paths(self, lam: Vector) -> dict[Path, CyclotomicNumber]:
        return {self.paths[i]: c for i, c in sorted(lam.items())}

    def relation_space(self) -> Subspace:
        return span(self.vectors, len(self.coords))


def _format_relation(quiver: Quiver, lam: Mapping[Path, CyclotomicNumber]) -> str:
    return str(PathAlgebraElement(quiver, dict(lam)))


def koszul_intersection(R: Subspace, coords: PathBasis, i: int) -> Subspace:
    """K_i: the intersection of V^a R V^b over a + b = i - N, in length-i coordinates.

    Below the relation degree K_i is all of V^i."""
    quiver = coords.quiver
    if not coords.paths:
        raise ValueError("empty coordinate basis")
    N = len(coords.paths[0])
    target = path_basis(quiver, i)
    if i < N:
        return span([{c: ONE} for c in range(len(target))], len(target))
    rel = [coords.from_vector(b) for b in R.basis]
    result: Subspace | None = None
    for a in range(i - N + 1):
        b = i - N - a
        left = [PathAlgebraElement.from_path(quiver, p) for p in quiver.enumerate_paths(a)]
        right = [PathAlgebraElement.from_path(quiver, p) for p in quiver.enumerate_paths(b)]
        vectors = []
        for r in rel:
            for u in left:
                ur = multiply(u, r)
                if ur.is_zero():
                    continue
                for w in right:
                    x = multiply(ur, w)
                    if not x.is_zero():
                        vectors.append(target.to_vector(x))
        piece = span(vectors, len(target))
        result = piece if result is None else intersect(result, piece)
        if result.dim == 0:
            break
    assert result is not None
    return result


def koszul_space(phi: Superpotential, k: int, i: int) -> Subspace:
    system = GeneratorSystem.of(phi, k)
    return koszul_intersection(system.relation_space(), system.coords, i)


# coherence ------------------------------------------------------------------

@dataclass
class CoherenceReport:
    passed: bool
    relation: dict[Path, CyclotomicNumber] | None = None
    residual: PathAlgebraElement | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def check_coherence(phi: Superpotential, k: int) -> CoherenceReport:
    """Every linear relation among the delta_p Phi_n must also kill the delta_p Phi'."""
    system = GeneratorSystem.of(phi, k)
    full = [left_derivative(p, phi.element) for p in system.paths]
    for lam in system.relations:
        total = PathAlgebraElement.zero(phi.quiver)
        for i, c in lam.items():
            total = total + full[i] * c
        if not total.is_zero():
            rel = system.relation_paths(lam)
            return CoherenceReport(False, rel, total,
                                   f"relation {_format_relation(phi.quiver, rel)} gives {total}")
    return CoherenceReport(True)


# deformation space ----------------------------------------------------------

@dataclass
class DeformationSpace:
    base: Superpotential
    k: int
    unknowns: list[Path]
    solution: Subspace

    @property
    def dimension(self) -> int:
        return self.solution.dim

    @property
    def index(self) -> dict[Path, int]:
        return {p: i for i, p in enumerate(self.unknowns)}

    def lower_terms(self, v: Mapping[int, object]) -> PathAlgebraElement:
        return PathAlgebraElement(self.base.quiver, {self.unknowns[i]: c for i, c in v.items()})

    def superpotential(self, v: Mapping[int, object]) -> Superpotential:
        return self.base.with_lower(self.lower_terms(v))

    def basis_superpotentials(self) -> list[Superpotential]:
        return [self.superpotential(b) for b in self.solution.basis]

    def coefficient(self, v: Mapping[int, object], p: Path) -> CyclotomicNumber:
        i = self.index.get(p)
        if i is None:
            return cyc(0)
        return cyc(v.get(i, 0))

    def parametrize(self, free: Sequence[Path]) -> list[Vector]:
        """Basis dual to the given coordinates: the i-th vector has c_{free[j]} = delta_ij."""
        if len(free) != self.dimension:
            raise ValueError(f"need {self.dimension} free coordinates, got {len(free)}")
        idx = self.index
        cols = []
        for p in free:
            if p not in idx:
                raise ValueError(f"{self.base.quiver.format_path(p)} is not an unknown")
            cols.append(idx[p])
        # M[r][c] = basis_r at free coordinate c; want M^-1 * basis
        dim = self.dimension
        ech = Echelon(track=True)
        restricted = [{c: b[col] for c, col in enumerate(cols) if col in b} for b in self.solution.basis]
        for r in restricted:
            ech.insert(r)
        if ech.rank != dim:
            raise ValueError("the chosen coordinates do not parametrize the solution space")
        out = []
        for c in range(dim):
            combo = ech.express({c: ONE})
            v: Vector = {}
            for r, coef in combo.items():
                add_scaled(v, self.solution.basis[r], coef)
            out.append(v)
        return out

    def relations_text(self) -> list[str]:
        """The solution space written as linear dependencies between named coefficients."""
        q = self.base.quiver
        return [format_linear([(b[i], f"c[{q.format_path(self.unknowns[i])}]") for i in sorted(b)])
                for b in self.solution.basis]


def format_linear(terms: Sequence[tuple[CyclotomicNumber, str]]) -> str:
    """Render sum c_i * name_i with unit coefficients and signs folded in."""
    parts = []
    for c, name in terms:
        c = cyc(c)
        if c.is_zero():
            continue
        if c.is_rational():
            r = c.to_fraction()
            sign = "-" if r < 0 else "+"
            body = name if abs(r) == 1 else f"{abs(r)}*{name}"
        else:
            sign, body = "+", f"({c})*{name}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def candidate_paths(phi: Superpotential, k: int) -> list[Path]:
    """Lower-term monomials of length k..n-1 allowed by the (twisted) closed-path condition."""
    q = phi.quiver
    twist = phi.twist
    out = []
    for m in range(phi.degree - 1, k - 1, -1):
        for p in q.enumerate_paths(m):
            target = p.tail if twist is None else twist.vertex(p.tail)
            if p.head == target:
                out.append(p)
    return out


def deformation_space(phi: Superpotential, k: int) -> DeformationSpace:
    """All lower terms phi_{n-1} + ... + phi_k making Phi_n + lower a k-coherent superpotential."""
    if not phi.element.is_homogeneous(phi.degree):
        phi = phi.homogeneous()
    report = phi.check()
    if not report.passed:
        raise SuperpotentialError(f"base is not a superpotential: {report.message}")
    system = GeneratorSystem.of(phi, k)
    quiver = phi.quiver
    twist = phi.twist
    s = sign(phi.degree)
    unknowns = candidate_paths(phi, k)
    index = {p: i for i, p in enumerate(unknowns)}
    equations: list[Vector] = []
    for p, i in index.items():
        if not p.arrows:
            continue
        b = p.arrows[0]
        a = twist.arrow_inverse(b) if twist else b
        rest = Path(p.arrows[1:], quiver.arrows[p.arrows[1]].head, p.tail) if len(p) > 1 \
            else quiver.trivial(quiver.arrows[b].tail)
        partner = quiver.compose(rest, quiver.arrow_path(a))
        eq: Vector = {i: ONE}
        j = index.get(partner) if partner is not None else None
        if j is not None:
            add_scaled(eq, {j: ONE}, -s)
        if eq:
            equations.append(eq)
    for lam in system.relations:
        for m in range(k, phi.degree):
            for t in quiver.enumerate_paths(m - k):
                eq = {}
                for g, c in lam.items():
                    pt = quiver.compose(system.paths[g], t)
                    if pt is not None and pt in index:
                        add_scaled(eq, {index[pt]: ONE}, c)
                if eq:
                    equations.append(eq)
    solution = nullspace(equations, len(unknowns))
    return DeformationSpace(phi, k, unknowns, solution)


# theta maps -----------------------------------------------------------------

@dataclass
class ThetaMap:
    """theta_j on generators: images[j][p] is theta_j(delta_p Phi_n), of length j."""

    base: Superpotential
    k: int
    images: dict[int, dict[Path, PathAlgebraElement]] = field(default_factory=dict)

    def __post_init__(self):
        N = self.N
        for j, table in self.images.items():
            if not 0 <= j < N:
                raise ThetaError(f"theta degree {j} outside 0..{N - 1}")
            for p, x in table.items():
                if len(p) != self.k:
                    raise ThetaError(f"generator path {self.quiver.format_path(p)} does not have length {self.k}")
                if not x.is_homogeneous(j):
                    raise ThetaError(f"theta_{j}({self.quiver.format_path(p)}) is not of length {j}")

    @property
    def N(self) -> int:
        return self.base.degree - self.k

    @property
    def quiver(self) -> Quiver:
        return self.base.quiver

    @property
    def system(self) -> GeneratorSystem:
        return GeneratorSystem.of(self.base, self.k)

    @classmethod
    def zero(cls, base: Superpotential, k: int) -> ThetaMap:
        return cls(base, k, {})

    def image(self, j: int, p: Path) -> PathAlgebraElement:
        return self.images.get(j, {}).get(p, PathAlgebraElement.zero(self.quiver))

    def is_zero(self) -> bool:
        return all(x.is_zero() for t in self.images.values() for x in t.values())

    def evaluate(self, j: int, x: PathAlgebraElement) -> PathAlgebraElement:
        """theta_j(x) for x in R, via a decomposition into generators."""
        mu = self.system.express(x)
        if mu is None:
            raise ThetaError(f"{x} does not lie in the relation space")
        out = PathAlgebraElement.zero(self.quiver)
        for i, c in mu.items():
            out = out + self.image(j, self.system.paths[i]) * c
        return out


def theta_from_superpotential(phi: Superpotential, k: int) -> ThetaMap:
    """theta_j(delta_p Phi_n) = -delta_p phi_{j+k}."""
    short = [p for p in phi.element.terms if len(p) < k]
    if short:
        raise ValueError(f"term {phi.quiver.format_path(short[0])} is shorter than k = {k}")
    report = check_coherence(phi, k)
    if not report.passed:
        raise CoherenceError(f"superpotential is not {k}-coherent: {report.message}")
    base = phi.homogeneous()
    images: dict[int, dict[Path, PathAlgebraElement]] = {}
    for j in range(phi.degree - k):
        part = phi.part(j + k)
        if part.is_zero():
            continue
        table = {}
        for p in phi.quiver.enumerate_paths(k):
            d = left_derivative(p, part)
            if not d.is_zero():
                table[p] = -d
        if table:
            images[j] = table
    return ThetaMap(base, k, images)


def superpotential_from_theta(theta: ThetaMap) -> tuple[Superpotential, ConditionReport]:
    """phi_{k+j} = -sum_p p theta_j(p); returns the assembled element and its validation."""
    quiver = theta.quiver
    lower = PathAlgebraElement.zero(quiver)
    for j, table in theta.images.items():
        for p, x in table.items():
            lower = lower - multiply(PathAlgebraElement.from_path(quiver, p), x)
    phi = theta.base.with_lower(lower)
    return phi, phi.check()


# psi and the PBW conditions ---------------------------------------------------

@dataclass
class PsiTerm:
    label: object  # a path q (|q| = k - 1) or a basis element of K_{N+1}
    source: PathAlgebraElement
    image: PathAlgebraElement


def psi(theta: ThetaMap, j: int) -> list[PsiTerm]:
    """psi(theta_j) = id (x) theta_j - theta_j (x) id on W_{N+1}."""
    if theta.k == 0:
        return psi_primitive(theta, j)
    base = theta.base
    quiver = base.quiver
    twist = base.twist
    n = base.degree
    flip = cyc(-1 if n % 2 else 1)  # (-1)^n
    out = []
    for q in quiver.enumerate_paths(theta.k - 1):
        source = left_derivative(q, base.top)
        if source.is_zero():
            continue
        image = PathAlgebraElement.zero(quiver)
        for a in range(len(quiver.arrows)):
            ap = quiver.arrow_path(a)
            qa = quiver.compose(q, ap)
            if qa is not None:
                image = image + multiply(PathAlgebraElement.from_path(quiver, ap), theta.image(j, qa))
            head = quiver.arrow_path(twist.arrow(a) if twist else a)
            sq = quiver.compose(head, q)
            if sq is not None:
                image = image + multiply(theta.image(j, sq), PathAlgebraElement.from_path(quiver, ap)) * flip
        out.append(PsiTerm(q, source, image))
    return out


def psi_domain(theta: ThetaMap) -> list[PathAlgebraElement]:
    system = theta.system
    K = koszul_intersection(system.relation_space(), system.coords, theta.N + 1)
    coords = path_basis(theta.quiver, theta.N + 1)
    return [coords.from_vector(b) for b in K.basis]


def psi_primitive(theta: ThetaMap, j: int, domain: Iterable[PathAlgebraElement] | None = None) -> list[PsiTerm]:
    """psi(theta_j)(w) = sum_a a theta_j(delta_a w) - theta_j(w delta'_a) a on K_{N+1}."""
    quiver = theta.quiver
    if domain is None:
        domain = psi_domain(theta)
    out = []
    for w in domain:
        image = PathAlgebraElement.zero(quiver)
        for a in range(len(quiver.arrows)):
            ap = quiver.arrow_path(a)
            arrow = PathAlgebraElement.from_path(quiver, ap)
            left = left_derivative(ap, w)
            if not left.is_zero():
                image = image + multiply(arrow, theta.evaluate(j, left))
            right = right_derivative(ap, w)
            if not right.is_zero():
                image = image - multiply(theta.evaluate(j, right), arrow)
        out.append(PsiTerm(w, w, image))
    return out


@dataclass
class ConditionResult:
    passed: bool
    witnesses: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class PBWReport:
    conditions: dict[str, ConditionResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, name: str) -> ConditionResult:
        return self.conditions[name]


def check_well_defined(theta: ThetaMap) -> ConditionResult:
    """PBW1: relations among generators go to relations among images, blockwise."""
    system = theta.system
    quiver = theta.quiver
    witnesses = []
    for lam in system.relations:
        for j in sorted(theta.images):
            total = PathAlgebraElement.zero(quiver)
            for i, c in lam.items():
                total = total + theta.image(j, system.paths[i]) * c
            if not total.is_zero():
                rel = _format_relation(quiver, system.relation_paths(lam))
                witnesses.append(f"theta_{j} sends the relation {rel} among generators to {total}")
    for j, table in sorted(theta.images.items()):
        for p, x in table.items():
            g = system.elements[system.index[p]]
            if g.is_zero() or x.is_zero():
                continue
            block = theta.base.generator_block(p)
            off = [t for t in x.terms if (t.head, t.tail) != block]
            if off:
                witnesses.append(f"theta_{j}({quiver.format_path(p)}) leaves the block of its generator: "
                                 f"{quiver.format_path(off[0])}")
    return ConditionResult(not witnesses, witnesses)


def _label(theta: ThetaMap, term: PsiTerm) -> str:
    if isinstance(term.label, Path):
        return f"delta_{theta.quiver.format_path(term.label)} Phi"
    return f"w = {term.source}"


def check_pbw(theta: ThetaMap) -> PBWReport:
    N = theta.N
    conditions = {"PBW1": check_well_defined(theta)}
    top = psi(theta, N - 1) if N >= 1 else []
    system = theta.system
    outside = []
    for t in top:
        if not t.image.is_zero() and system.express(t.image) is None:
            outside.append(f"psi(theta_{N - 1})({_label(theta, t)}) = {t.image} is not in R")
    conditions["PBW2"] = ConditionResult(not outside, outside)
    w3, w4 = [], []
    if outside:
        w3.append("undefined: PBW2 fails")
        w4.append("undefined: PBW2 fails")
    else:
        lower = {j: psi(theta, j) for j in range(N - 1)}
        for idx, t in enumerate(top):
            for j in range(1, N):
                value = theta.evaluate(j, t.image) + lower[j - 1][idx].image
                if not value.is_zero():
                    w3.append(f"j={j}, {_label(theta, t)}: {value}")
            value = theta.evaluate(0, t.image)
            if not value.is_zero():
                w4.append(f"{_label(theta, t)}: theta_0 gives {value}")
    conditions["PBW3"] = ConditionResult(not w3, w3)
    conditions["PBW4"] = ConditionResult(not w4, w4)
    return PBWReport(conditions)


def check_zero_pbw(theta: ThetaMap) -> PBWReport:
    conditions = {"PBW1": check_well_defined(theta)}
    witnesses = []
    for j in range(theta.N):
        for t in psi(theta, j):
            if not t.image.is_zero():
                witnesses.append(f"psi(theta_{j})({_label(theta, t)}) = {t.image}")
    conditions["ZPBW"] = ConditionResult(not witnesses, witnesses)
    return PBWReport(conditions)


# one-vertex Calabi-Yau criterion ---------------------------------------------

@dataclass
class WZReport:
    passed: bool
    forms_agree: bool
    direct: PathAlgebraElement
    cyclic: PathAlgebraElement

    def __bool__(self) -> bool:
        return self.passed


def check_wz(phi: Superpotential, theta1: Mapping[Path, PathAlgebraElement]) -> WZReport:
    """Evaluate the one-vertex obstruction two ways and report whether it vanishes.

    direct: sum_i (-1)^i sum_{|u|=i, |v|=n-2-i} u theta_1(delta_u Phi delta'_v) v
    cyclic: from phi_{n-1} = sum_p p theta_1(p), the coefficient of w is
            sum_i (-1)^(i n) c_{w_{i+2} ... w_{n-1} w_1 ... w_{i+1}}
    """
    quiver = phi.quiver
    if quiver.num_vertices != 1:
        raise ValueError("the criterion is stated for one-vertex quivers")
    n = phi.degree
    if n < 2:
        raise ValueError("degree must be at least 2")
    theta = ThetaMap(phi.homogeneous(), n - 2, {1: dict(theta1)})
    ones = lambda p: PathAlgebraElement.from_path(quiver, p)
    direct = PathAlgebraElement.zero(quiver)
    for i in range(n - 1):
        for u in quiver.enumerate_paths(i):
            du = left_derivative(u, phi.top)
            if du.is_zero():
                continue
            for v in quiver.enumerate_paths(n - 2 - i):
                x = right_derivative(v, du)
                if x.is_zero():
                    continue
                term = multiply(multiply(ones(u), theta.evaluate(1, x)), ones(v))
                direct = direct + (term if i % 2 == 0 else -term)
    # cyclic-coefficient form
    phi1 = PathAlgebraElement.zero(quiver)
    for p, x in theta1.items():
        phi1 = phi1 + multiply(ones(p), x)
    coeffs: dict[Path, CyclotomicNumber] = {}
    for w in quiver.enumerate_paths(n - 1):
        total = cyc(0)
        letters = w.arrows
        for i in range(n - 1):
            word = letters[i + 1:] + letters[:i + 1]
            c = phi1.coefficient(quiver.from_arrows(word))
            total = total + (c if (i * n) % 2 == 0 else -c)
        if not total.is_zero():
            coeffs[w] = total
    cyclic = PathAlgebraElement(quiver, coeffs)
    return WZReport(direct.is_zero(), direct == cyclic, direct, cyclic)
