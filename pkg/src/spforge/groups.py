"""Finite matrix groups over cyclotomic fields, their characters and McKay quivers."""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cyclotomic import CyclotomicNumber, cyc, zeta
from .linalg import rank
from .quiver import Quiver

Matrix = tuple  # tuple of rows, each a tuple of CyclotomicNumber

DEFAULT_MAX_ORDER = 100000
_TABLE_LIMIT = 5000


class GroupError(ValueError):
    pass


class CharacterTableError(RuntimeError):
    pass


def max_group_order() -> int:
    value = os.environ.get("SPFORGE_MAX_GROUP")
    return int(value) if value else DEFAULT_MAX_ORDER


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    d = len(x)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc = None
            for k in range(d):
                a, b = x[i][k], y[k][j]
                if a.is_zero() or b.is_zero():
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else CyclotomicNumber.rational(0, x[0][0].order))
        out.append(tuple(row))
    return tuple(out)


def _key(m: Matrix):
    return tuple(tuple(x.coeffs for x in row) for row in m)


def identity_matrix(d: int, order: int = 1) -> Matrix:
    return tuple(tuple(CyclotomicNumber.rational(1 if i == j else 0, order) for j in range(d)) for i in range(d))


def _embed_matrix(m, order: int) -> Matrix:
    return tuple(tuple(cyc(x).in_order(order) for x in row) for row in m)


def trace(m: Matrix) -> CyclotomicNumber:
    out = cyc(0)
    for i in range(len(m)):
        out = out + m[i][i]
    return out


def det(m: Matrix) -> CyclotomicNumber:
    from .linalg import determinant
    return determinant([list(r) for r in m])


def rank_minus_identity(m: Matrix) -> int:
    d = len(m)
    rows = []
    for i in range(d):
        rows.append({j: m[i][j] - (1 if i == j else 0) for j in range(d)})
    return rank(rows)


def dual_sum(m: Matrix) -> Matrix:
    """g (+) (g^-1)^T, the action on h + h*."""
    d = len(m)
    inv_cols = []
    for c in range(d):
        col = _solve_cyc(m, [cyc(1 if r == c else 0) for r in range(d)])
        inv_cols.append(col)
    inv = [[inv_cols[c][r] for c in range(d)] for r in range(d)]
    zero = CyclotomicNumber.rational(0, m[0][0].order)
    out = []
    for i in range(d):
        out.append(tuple(list(m[i]) + [zero] * d))
    for i in range(d):
        # row i of (g^-1)^T is column i of g^-1
        out.append(tuple([zero] * d + [inv[j][i].in_order(m[0][0].order) for j in range(d)]))
    return tuple(out)


def _solve_cyc(m: Matrix, b: list) -> list:
    from .linalg import solve
    d = len(m)
    rows = [{j: m[i][j] for j in range(d) if not m[i][j].is_zero()} for i in range(d)]
    x = solve(rows, {i: b[i] for i in range(d) if not b[i].is_zero()}, d)
    if x is None:
        raise GroupError("singular matrix")
    return [x.get(j, cyc(0)) for j in range(d)]


@dataclass
class MatrixGroup:
    dimension: int
    field_order: int
    elements: list[Matrix]
    generators: list[int]
    rmul: list[list[int]]  # rmul[x][g] = index of x * generator g
    parent: list[int]
    via: list[int]
    _index: dict = field(repr=False, default_factory=dict)
    _table: list[list[int]] | None = field(repr=False, default=None)
    _inverse: list[int] | None = field(repr=False, default=None)

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, m: Matrix) -> int:
        return self._index[_key(_embed_matrix(m, self.field_order))]

    @property
    def table(self) -> list[list[int]] | None:
        if self._table is None and self.order <= _TABLE_LIMIT:
            n = self.order
            table = [[0] * n for _ in range(n)]
            for x in range(n):
                row = table[x]
                row[0] = x
                for y in range(1, n):
                    row[y] = self.rmul[row[self.parent[y]]][self.via[y]]
            self._table = table
        return self._table

    def mul(self, x: int, y: int) -> int:
        t = self.table
        if t is not None:
            return t[x][y]
        return self._index[_key(_matmul(self.elements[x], self.elements[y]))]

    @property
    def inverse(self) -> list[int]:
        if self._inverse is None:
            inv = [0] * self.order
            for x in range(1, self.order):
                # the last power of x before the identity
                y, prev = x, x
                while y != 0:
                    prev = y
                    y = self.mul(y, x)
                inv[x] = prev
            self._inverse = inv
        return self._inverse

    def element_order(self, x: int) -> int:
        m, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            m += 1
        return m

    def power(self, x: int, s: int) -> int:
        y = 0
        for _ in range(s):
            y = self.mul(y, x)
        return y

    @property
    def exponent(self) -> int:
        out = 1
        for x in range(self.order):
            out = math.lcm(out, self.element_order(x))
        return out


def enumerate_group(generators: Sequence[Sequence[Sequence]], max_order: int | None = None,
                    field_order: int | None = None) -> MatrixGroup:
    """Close a list of invertible matrices under multiplication (breadth first)."""
    limit = max_order or max_group_order()
    if not generators:
        raise GroupError("need at least one generator")
    gens = [tuple(tuple(cyc(x) for x in row) for row in g) for g in generators]
    d = len(gens[0])
    if any(len(g) != d or any(len(r) != d for r in g) for g in gens):
        raise GroupError("generators must be square matrices of one size")
    order = field_order or 1
    for g in gens:
        for row in g:
            for x in row:
                order = math.lcm(order, x.minimal_form().order)
    gens = [_embed_matrix(g, order) for g in gens]
    for g in gens:
        if det(g).is_zero():
            raise GroupError("generator is singular")
    ident = identity_matrix(d, order)
    elements = [ident]
    index = {_key(ident): 0}
    parent, via = [-1], [-1]
    rmul: list[list[int]] = []
    gen_idx = []
    i = 0
    while i < len(elements):
        x = elements[i]
        row = []
        for gi, g in enumerate(gens):
            y = _matmul(x, g)
            k = _key(y)
            j = index.get(k)
            if j is None:
                j = len(elements)
                if j >= limit:
                    raise GroupError(f"group order exceeds the bound {limit} (set SPFORGE_MAX_GROUP)")
                index[k] = j
                elements.append(y)
                parent.append(i)
                via.append(gi)
            row.append(j)
        rmul.append(row)
        i += 1
    for g in gens:
        gen_idx.append(index[_key(g)])
    return MatrixGroup(d, order, elements, gen_idx, rmul, parent, via, index)


# conjugacy classes and characters ------------------------------------------------

def conjugacy_classes(G: MatrixGroup) -> list[list[int]]:
    cache = G.__dict__.get("_classes")
    if cache is not None:
        return cache
    inv = G.inverse
    seen = [False] * G.order
    classes = []
    for x in range(G.order):
        if seen[x]:
            continue
        cls = sorted({G.mul(G.mul(g, x), inv[g]) for g in range(G.order)})
        for y in cls:
            seen[y] = True
        classes.append(cls)
    G.__dict__["_classes"] = classes
    return classes


def class_of(G: MatrixGroup) -> list[int]:
    out = [0] * G.order
    for c, cls in enumerate(conjugacy_classes(G)):
        for x in cls:
            out[x] = c
    return out


def class_constants(G: MatrixGroup) -> list[list[list[int]]]:
    """a[i][j][l] = #{(x, y) in C_i x C_j : x y = z} for a fixed z in C_l."""
    classes = conjugacy_classes(G)
    which = class_of(G)
    inv = G.inverse
    r = len(classes)
    a = [[[0] * r for _ in range(r)] for _ in range(r)]
    for l, cls in enumerate(classes):
        z = cls[0]
        for x in range(G.order):
            y = G.mul(inv[x], z)
            a[which[x]][which[y]][l] += 1
    return a


@dataclass
class CharacterTable:
    group: MatrixGroup
    classes: list[list[int]]
    rows: list[list[CyclotomicNumber]]

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.classes]

    @property
    def degrees(self) -> list[int]:
        return [int(r[0].to_fraction()) for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def inner(self, chi: Sequence[CyclotomicNumber], psi: Sequence[CyclotomicNumber]) -> CyclotomicNumber:
        total = cyc(0)
        for size, x, y in zip(self.class_sizes, chi, psi):
            total = total + x * y.conjugate() * size
        return total / self.group.order

    def decompose(self, chi: Sequence[CyclotomicNumber]) -> list[int]:
        out = []
        for row in self.rows:
            m = self.inner(chi, row)
            if not m.is_rational() or m.to_fraction().denominator != 1 or m.to_fraction() < 0:
                raise CharacterTableError(f"multiplicity {m} is not a nonnegative integer")
            out.append(int(m.to_fraction()))
        return out

    def find(self, chi: Sequence[CyclotomicNumber]) -> int:
        for i, row in enumerate(self.rows):
            if all(x == y for x, y in zip(row, chi)):
                return i
        raise CharacterTableError("class function is not an irreducible character of the table")

    def character_of(self, matrices: Sequence[Matrix] | None = None) -> list[CyclotomicNumber]:
        """Trace character of the defining representation (or of given element matrices)."""
        mats = matrices if matrices is not None else self.group.elements
        return [trace(mats[c[0]]) for c in self.classes]

    def verify(self) -> list[str]:
        """Exact certificate: orthonormality, degree sum, count and the class algebra identity."""
        G = self.group
        problems = []
        r = len(self.classes)
        if len(self.rows) != r:
            problems.append(f"{len(self.rows)} characters for {r} classes")
        if sum(d * d for d in self.degrees) != G.order:
            problems.append("squared degrees do not sum to the group order")
        for i, x in enumerate(self.rows):
            for j, y in enumerate(self.rows[: i + 1]):
                val = self.inner(x, y)
                if val != (1 if i == j else 0):
                    problems.append(f"<chi_{i}, chi_{j}> = {val}")
        a = class_constants(G)
        sizes = self.class_sizes
        for t, row in enumerate(self.rows):
            d = row[0]
            omega = [row[c] * sizes[c] / d for c in range(r)]
            for i in range(r):
                for j in range(i, r):
                    rhs = cyc(0)
                    for l in range(r):
                        if a[i][j][l]:
                            rhs = rhs + omega[l] * a[i][j][l]
                    if omega[i] * omega[j] != rhs:
                        problems.append(f"chi_{t} fails the class algebra identity at ({i}, {j})")
                        break
                else:
                    continue
                break
        return problems


def _sort_key(row_complex: Sequence[complex], degree: int):
    key = []
    for v in row_complex:
        angle = cmath.phase(v) % (2 * math.pi) if abs(v) > 1e-9 else 0.0
        if abs(angle - 2 * math.pi) < 1e-9:
            angle = 0.0
        key.append((round(angle, 9), round(abs(v), 9)))
    return (degree, tuple(key))


def _ordered(table: CharacterTable) -> CharacterTable:
    rows = sorted(table.rows, key=lambda r: _sort_key([x.to_complex() for x in r], int(r[0].to_fraction())))
    return CharacterTable(table.group, table.classes, rows)


def character_table(G: MatrixGroup, rows: Sequence[Sequence] | None = None, seed: int = 0) -> CharacterTable:
    """Irreducible characters via simultaneous eigenvectors of the class matrices.

    Numerical eigenvectors give approximate values; the exact values are recovered
    from eigenvalue multiplicities along power maps and then certified exactly.
    A user-supplied table is verified the same way.
    """
    classes = conjugacy_classes(G)
    if rows is not None:
        table = CharacterTable(G, classes, [[cyc(x) for x in r] for r in rows])
        problems = table.verify()
        if problems:
            raise CharacterTableError("; ".join(problems[:5]))
        return _ordered(table)
    cache = G.__dict__.get("_char_table")
    if cache is not None:
        return cache
    r = len(classes)
    sizes = [len(c) for c in classes]
    a = np.array(class_constants(G), dtype=float)
    rng = np.random.default_rng(seed)
    for attempt in range(20):
        weights = rng.normal(size=r)
        M = np.tensordot(weights, a, axes=1)  # M[j][l] = sum_i w_i a[i][j][l]
        vals, vecs = np.linalg.eig(M)
        gaps = [abs(vals[i] - vals[j]) for i in range(r) for j in range(i)]
        if not gaps or min(gaps) > 1e-6:
            break
    else:
        raise CharacterTableError("could not separate the class algebra eigenvalues")
    rows_c = []
    for t in range(r):
        omega = vecs[:, t] / vecs[0, t]
        norm = sum(abs(omega[c]) ** 2 / sizes[c] for c in range(r))
        d = math.sqrt(G.order / norm)
        rows_c.append([omega[c] * d / sizes[c] for c in range(r)])
    which = class_of(G)
    exponent = G.exponent
    exact_rows = []
    for row in rows_c:
        values = []
        for c, cls in enumerate(classes):
            g = cls[0]
            m = G.element_order(g)
            # chi(g^s) for s = 0..m-1 along the power map
            powers = []
            y = 0
            for _ in range(m):
                powers.append(row[which[y]])
                y = G.mul(y, g)
            terms = {}
            for t in range(m):
                mult = sum(powers[s] * cmath.exp(-2j * math.pi * t * s / m) for s in range(m)) / m
                k = round(mult.real)
                if abs(mult - k) > 1e-6 or k < 0:
                    raise CharacterTableError("eigenvalue multiplicities are not integers")
                if k:
                    terms[t * (exponent // m)] = k
            values.append(CyclotomicNumber.from_exponents(terms, exponent))
        exact_rows.append(values)
    table = _ordered(CharacterTable(G, classes, exact_rows))
    problems = table.verify()
    if problems:
        raise CharacterTableError("; ".join(problems[:5]))
    G.__dict__["_char_table"] = table
    return table


# McKay quivers ----------------------------------------------------------------

@dataclass
class McKayQuiver:
    quiver: Quiver
    table: CharacterTable
    representation: list[CyclotomicNumber]
    multiplicities: list[list[int]]
    twist: list[int]
    arrow_names: dict[tuple[int, int, int], str]

    @property
    def num_vertices(self) -> int:
        return self.quiver.num_vertices

    def adjacency(self) -> list[list[int]]:
        return [list(r) for r in self.multiplicities]


def arrow_name(i: int, j: int, k: int) -> str:
    return f"{i}>{j}#{k}"


def det_character(table: CharacterTable, matrices: Sequence[Matrix] | None = None) -> list[CyclotomicNumber]:
    mats = matrices if matrices is not None else table.group.elements
    return [det(mats[c[0]]) for c in table.classes]


def doubled_character(table: CharacterTable) -> list[CyclotomicNumber]:
    chi = table.character_of()
    return [x + x.conjugate() for x in chi]


def det_twist(table: CharacterTable, det_chi: Sequence[CyclotomicNumber] | None = None) -> list[int]:
    det_chi = det_chi if det_chi is not None else det_character(table)
    out = []
    for row in table.rows:
        out.append(table.find([x * y for x, y in zip(row, det_chi)]))
    return out


def mckay_quiver(G: MatrixGroup, table: CharacterTable | None = None, *, dual: bool = False,
                 aliases: dict[str, str] | None = None) -> McKayQuiver:
    """Vertices are irreducibles; a_ij = <chi_i chi_V, chi_j> arrows i -> j.

    With ``dual`` the representation is V + V*, whose determinant is trivial."""
    table = table or character_table(G)
    chi_v = doubled_character(table) if dual else table.character_of()
    det_chi = [cyc(1)] * len(table.classes) if dual else det_character(table)
    r = len(table.rows)
    mult = []
    for i in range(r):
        prod = [x * y for x, y in zip(table.rows[i], chi_v)]
        mult.append(table.decompose(prod))
    aliases = aliases or {}
    arrows = []
    names = {}
    for i in range(r):
        for j in range(r):
            for k in range(mult[i][j]):
                raw = arrow_name(i, j, k)
                name = aliases.get(raw, raw)
                names[(i, j, k)] = name
                arrows.append((name, i, j))
    quiver = Quiver([str(i) for i in range(r)], arrows)
    return McKayQuiver(quiver, table, chi_v, mult, det_twist(table, det_chi), names)


def is_in_sl(G: MatrixGroup) -> bool:
    return all(det(G.elements[g]) == 1 for g in G.generators)


def is_small(G: MatrixGroup) -> bool:
    """No pseudo-reflections: no element fixes a hyperplane pointwise."""
    return all(rank_minus_identity(m) != 1 for m in G.elements[1:])


def pseudo_reflections(G: MatrixGroup) -> list[int]:
    return [i for i, m in enumerate(G.elements) if i and rank_minus_identity(m) == 1]


@dataclass
class SymplecticReflectionReport:
    classes: list[list[int]]
    dimension: int

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def predicted_dimension(self) -> int:
        return len(self.classes) + 1


def symplectic_reflections(G: MatrixGroup, *, dual: bool = False) -> SymplecticReflectionReport:
    """Classes of elements with rank(g - I) = 2 on the symplectic space (h + h* if ``dual``)."""
    dim = 2 * G.dimension if dual else G.dimension
    if dim % 2:
        raise GroupError("symplectic reflections need an even dimensional space")
    out = []
    for cls in conjugacy_classes(G):
        g = G.elements[cls[0]]
        m = dual_sum(g) if dual else g
        if cls[0] != 0 and rank_minus_identity(m) == 2:
            out.append(cls)
    return SymplecticReflectionReport(out, dim)


def preprojective_superpotential(M: McKayQuiver):
    """Phi_2 = sum over paired arrows (a a* - a* a) on a symmetric McKay quiver."""
    from .quiver import PathAlgebraElement
    from .superpotential import Superpotential
    q = M.quiver
    a = M.multiplicities
    r = len(a)
    terms = {}
    for i in range(r):
        for j in range(i, r):
            if a[i][j] != a[j][i]:
                raise GroupError("the McKay quiver is not symmetric")
            if i == j:
                if a[i][i] % 2:
                    raise GroupError(f"odd number of loops at vertex {i}")
                pairs = [(M.arrow_names[(i, i, 2 * k)], M.arrow_names[(i, i, 2 * k + 1)])
                         for k in range(a[i][i] // 2)]
            else:
                pairs = [(M.arrow_names[(i, j, k)], M.arrow_names[(j, i, k)]) for k in range(a[i][j])]
            for x, y in pairs:
                terms[q.path(x, y)] = 1
                terms[q.path(y, x)] = -1
    return Superpotential(PathAlgebraElement(q, terms), 2)


def cyclic_group(n: int, q: int) -> MatrixGroup:
    """Z_n acting by diag(z, z^q)."""
    g = [[zeta(n), cyc(0)], [cyc(0), zeta(n, q)]]
    return enumerate_group([g])
