"""The bimodule complex attached to a superpotential with k = n - 2.

Terms are written A (x) W_i (x) A.  A basis element of W_i is a generator
delta_p Phi_n with |p| = n - i, labelled by p.  An element of the free
bimodule is a sum of quadruples (left path, generator label, right path,
coefficient).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cyclotomic import CyclotomicNumber, cyc
from .linalg import Echelon, determinant
from .pbw import check_coherence
from .quiver import Path, PathAlgebraElement, Quiver, left_derivative, path_basis
from .superpotential import Superpotential, SuperpotentialError, sign


def epsilon(i: int, n: int) -> int:
    if 2 * i < n + 1:
        return -1 if (i * (n - i)) % 2 else 1
    return 1


def gammas(n: int) -> list[CyclotomicNumber]:
    """Scalars with (-1)^n gamma_{j-1} eps_j = gamma_j eps_{n-j+1} (-1)^j and gamma_0 = 1."""
    out = [cyc(1)]
    for j in range(1, n + 1):
        s = 1 if (n + j) % 2 == 0 else -1
        out.append(out[-1] * (s * epsilon(j, n)) / epsilon(n - j + 1, n))
    return out


Quad = tuple  # (left: Path, label: Path, right: Path, coeff: CyclotomicNumber)


@dataclass
class ComplexPresentation:
    phi: Superpotential
    degree: int
    generators: dict[int, list[Path]]
    differentials: dict[int, dict[Path, list[Quad]]]
    epsilons: dict[int, int]
    expansions: dict[Path, PathAlgebraElement] = field(default_factory=dict)

    @property
    def quiver(self) -> Quiver:
        return self.phi.quiver


def build_complex(phi: Superpotential) -> ComplexPresentation:
    """Differentials d_i = eps_i (d_i^l + (-1)^i d_i^r) on generator labels."""
    if phi.twist is not None:
        raise SuperpotentialError("the complex is built only for untwisted superpotentials")
    n = phi.degree
    q = phi.quiver
    top = phi.top
    s = sign(n)
    expansions: dict[Path, PathAlgebraElement] = {}
    generators: dict[int, list[Path]] = {}
    for i in range(n + 1):
        gens = []
        for p in q.enumerate_paths(n - i):
            d = left_derivative(p, top)
            if not d.is_zero():
                gens.append(p)
                expansions[p] = d
        generators[i] = gens
    eps = {i: epsilon(i, n) for i in range(1, n + 1)}
    differentials: dict[int, dict[Path, list[Quad]]] = {}
    for i in range(1, n + 1):
        table = {}
        for p in generators[i]:
            quads = []
            for a in range(len(q.arrows)):
                ap = q.arrow_path(a)
                pa = q.compose(p, ap)
                if pa is not None and pa in expansions:
                    quads.append((ap, pa, q.trivial(p.head), cyc(eps[i])))
                lp = q.compose(ap, p)
                if lp is not None and lp in expansions:
                    c = eps[i] * (1 if i % 2 == 0 else -1) * s
                    quads.append((q.trivial(p.tail), lp, ap, cyc(c)))
            table[p] = quads
        differentials[i] = table
    return ComplexPresentation(phi, n, generators, differentials, eps, expansions)


def _compose(q: Quiver, x: Path, y: Path) -> Path:
    r = q.compose(x, y)
    assert r is not None, "incomposable outer factors"
    return r


@dataclass
class DSquaredReport:
    passed: bool
    residuals: dict[int, list[str]]

    def __bool__(self) -> bool:
        return self.passed


def verify_d_squared(C: ComplexPresentation, phi: Superpotential | None = None) -> DSquaredReport:
    """Check d_{j-1} d_j = 0 in the deformed algebra, for j = 2..n.

    Composites whose outer factor has length two are grouped and rewritten with
    delta_t Phi_n = -delta_t phi_{n-2} (|t| = n - 2), as in the deformed algebra.
    """
    phi = phi or C.phi
    n = C.degree
    q = C.quiver
    if not phi.part(n - 1).is_zero():
        raise SuperpotentialError("phi_{n-1} must vanish for the deformed complex")
    # the rewrite below is only well defined when the lower terms respect the
    # linear relations among the delta_t Phi_n
    coherent = check_coherence(phi, n - 2)
    if not coherent.passed:
        return DSquaredReport(False, {0: [f"lower terms are not {n - 2}-coherent: {coherent.message}"]})
    lower = phi.part(n - 2) if n >= 2 else PathAlgebraElement.zero(q)
    rel_paths = q.enumerate_paths(n - 2)
    rel_elems = [left_derivative(t, phi.top) for t in rel_paths]
    coords2 = path_basis(q, 2)
    ech = Echelon(track=True)
    for e in rel_elems:
        ech.insert(coords2.to_vector(e))
    scalar = [left_derivative(t, lower) for t in rel_paths]

    def rewrite(x: PathAlgebraElement) -> PathAlgebraElement | None:
        mu = ech.express(coords2.to_vector(x))
        if mu is None:
            return None
        out = PathAlgebraElement.zero(q)
        for i, c in mu.items():
            out = out - scalar[i] * c
        return out

    residuals: dict[int, list[str]] = {}
    for j in range(2, n + 1):
        acc: dict[tuple[Path, Path, Path], CyclotomicNumber] = {}
        for p in C.generators[j]:
            acc.clear()
            for (l1, t, r1, c1) in C.differentials[j][p]:
                for (l2, t2, r2, c2) in C.differentials[j - 1].get(t, ()):
                    left = _compose(q, l1, l2)
                    right = _compose(q, r2, r1)
                    for w, cw in C.expansions[t2].terms.items():
                        key = (left, w, right)
                        acc[key] = acc.get(key, cyc(0)) + c1 * c2 * cw
            problems = _settle(q, acc, rewrite)
            if problems:
                residuals.setdefault(j, []).extend(
                    f"d_{j - 1} d_{j} on {q.format_path(p)}: {msg}" for msg in problems)
    return DSquaredReport(not residuals, residuals)


def _settle(q: Quiver, acc, rewrite) -> list[str]:
    left_groups: dict[tuple[Path, Path], dict[Path, CyclotomicNumber]] = {}
    right_groups: dict[tuple[Path, Path], dict[Path, CyclotomicNumber]] = {}
    final: dict[tuple[Path, Path, Path], CyclotomicNumber] = {}
    problems = []

    def bump(key, c):
        final[key] = final.get(key, cyc(0)) + c

    for (left, w, right), c in acc.items():
        if c.is_zero():
            continue
        if len(left) == 2 and len(right) == 0:
            g = left_groups.setdefault((w, right), {})
            g[left] = g.get(left, cyc(0)) + c
        elif len(right) == 2 and len(left) == 0:
            g = right_groups.setdefault((left, w), {})
            g[right] = g.get(right, cyc(0)) + c
        else:
            bump((left, w, right), c)
    for (w, right), g in left_groups.items():
        x = PathAlgebraElement(q, g)
        y = rewrite(x)
        if y is None:
            problems.append(f"left factor {x} next to {q.format_path(w)} is not a relation")
            continue
        for e, c in y.terms.items():
            bump((e, w, right), c)
    for (left, w), g in right_groups.items():
        x = PathAlgebraElement(q, g)
        y = rewrite(x)
        if y is None:
            problems.append(f"right factor {x} next to {q.format_path(w)} is not a relation")
            continue
        for e, c in y.terms.items():
            bump((left, w, e), c)
    for (left, w, right), c in sorted(final.items(), key=lambda kv: tuple(q.sort_key(p) for p in kv[0])):
        if not c.is_zero():
            problems.append(f"{c} * {q.format_path(left)} (x) {q.format_path(w)} (x) {q.format_path(right)}")
    return problems


@dataclass
class AugmentationReport:
    passed: bool
    residuals: list[str]

    def __bool__(self) -> bool:
        return self.passed


def verify_augmentation(C: ComplexPresentation, phi: Superpotential | None = None) -> AugmentationReport:
    """mu d_1 = 0, where mu multiplies the outer factors through W_0."""
    q = C.quiver
    residuals = []
    for p in C.generators.get(1, []):
        total = PathAlgebraElement.zero(q)
        for (left, t, right, c) in C.differentials[1][p]:
            ct = C.expansions[t]
            for e, c0 in ct.terms.items():
                path = _compose(q, _compose(q, left, e), right)
                total = total + PathAlgebraElement.from_path(q, path, c * c0)
        if not total.is_zero():
            residuals.append(f"mu d_1 on {q.format_path(p)}: {total}")
    return AugmentationReport(not residuals, residuals)


@dataclass
class PairingBlock:
    head: int
    tail: int
    rows: list[Path]
    columns: list[Path]
    dim_left: int
    dim_right: int
    rank: int
    determinant: CyclotomicNumber | None

    @property
    def perfect(self) -> bool:
        return self.dim_left == self.dim_right == self.rank


@dataclass
class PairingData:
    j: int
    blocks: list[PairingBlock]
    gammas: list[CyclotomicNumber]

    @property
    def perfect(self) -> bool:
        return all(b.perfect for b in self.blocks)

    def offending(self) -> list[tuple[int, int]]:
        return [(b.head, b.tail) for b in self.blocks if not b.perfect]


def pairing(phi: Superpotential, j: int) -> PairingData:
    """The pairing e W_j f x f W_{n-j} e -> K, with entries c_{qp}."""
    n = phi.degree
    if not phi.element.is_homogeneous(n):
        raise SuperpotentialError("the pairing is defined for homogeneous superpotentials")
    q = phi.quiver
    top = phi.top
    gens_j = [p for p in q.enumerate_paths(n - j) if not left_derivative(p, top).is_zero()]
    gens_c = [p for p in q.enumerate_paths(j) if not left_derivative(p, top).is_zero()]
    coords_j = path_basis(q, j)
    coords_c = path_basis(q, n - j)
    blocks: dict[tuple[int, int], tuple[list[Path], list[Path]]] = {}
    for p in gens_j:
        blocks.setdefault((p.tail, p.head), ([], []))[0].append(p)
    for r in gens_c:
        blocks.setdefault((r.head, r.tail), ([], []))[1].append(r)
    out = []
    for (e, f), (rows, cols) in sorted(blocks.items()):
        left_ech, right_ech = Echelon(), Echelon()
        row_basis = [p for p in rows if left_ech.insert(coords_j.to_vector(left_derivative(p, top)))]
        col_basis = [r for r in cols if right_ech.insert(coords_c.to_vector(left_derivative(r, top)))]
        matrix = [[top.coefficient(_compose(q, r, p)) for r in cols] for p in rows]
        ech = Echelon()
        for row in matrix:
            v = {i: x for i, x in enumerate(row) if not x.is_zero()}
            if v:
                ech.insert(v)
        det = None
        if len(row_basis) == len(col_basis):
            sub = [[top.coefficient(_compose(q, r, p)) for r in col_basis] for p in row_basis]
            det = determinant(sub) if sub else cyc(1)
        out.append(PairingBlock(e, f, rows, cols, left_ech.rank, right_ech.rank, ech.rank, det))
    return PairingData(j, out, gammas(n))


def check_antisymmetry(phi: Superpotential) -> list[tuple[Path, Path]]:
    """Pairs (p, q) violating c_{qp} = (-1)^((n-1)|q|) c_{pq}."""
    n = phi.degree
    q = phi.quiver
    top = phi.top
    bad = []
    for w, c in top.terms.items():
        for cut in range(1, n):
            first = q.from_arrows(w.arrows[:cut])  # the head-side piece
            second = q.from_arrows(w.arrows[cut:])
            # w = first.second = q p with q = first, p = second
            swapped = q.compose(second, first)
            expect = c if ((n - 1) * len(first)) % 2 == 0 else -c
            other = top.coefficient(swapped) if swapped is not None else cyc(0)
            if other != expect:
                bad.append((second, first))
    return bad


def verify_cy(phi: Superpotential) -> dict[str, object]:
    C = build_complex(phi)
    base = phi.homogeneous()
    return {
        "d_squared": verify_d_squared(C, phi),
        "augmentation": verify_augmentation(C, phi),
        "pairing": [pairing(base, j) for j in range(phi.degree + 1)],
    }
