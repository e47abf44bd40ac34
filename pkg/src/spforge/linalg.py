"""Exact sparse linear algebra over cyclotomic fields.

Vectors are dicts mapping a column index to a nonzero scalar.  Row reduction
is incremental Gauss-Jordan: every stored row is kept fully reduced against
the others, so membership and coordinates are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomic import CyclotomicNumber, cyc

Vector = dict  # dict[int, CyclotomicNumber]


def add_scaled(target: Vector, source: Vector, scale) -> None:
    """target += scale * source, dropping entries that cancel."""
    for k, v in source.items():
        cur = target.get(k)
        new = v * scale if cur is None else cur + v * scale
        if new.is_zero():
            target.pop(k, None)
        else:
            target[k] = new


def scale_vector(v: Vector, c) -> Vector:
    c = cyc(c)
    if c.is_zero():
        return {}
    return {k: x * c for k, x in v.items()}


def clean(v: dict) -> Vector:
    return {k: cyc(x) for k, x in v.items() if not cyc(x).is_zero()}


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Optionally tracks, for every stored row, its expression as a combination of
    the inserted vectors (``track=True``).
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, Vector] = {}  # pivot column -> row with leading 1
        self.track = track
        self.combos: dict[int, Vector] = {}
        self.count = 0
        self.dependencies: list[Vector] = []  # combos of inserted vectors that vanish

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_full(self, v: Vector, combo: Vector | None) -> tuple[Vector, Vector | None]:
        # stored rows vanish on every other pivot, so one pass is enough
        for col in [c for c in v if c in self.rows]:
            c = v[col]
            add_scaled(v, self.rows[col], -c)
            if combo is not None:
                add_scaled(combo, self.combos[col], -c)
        return v, combo

    def insert(self, v: Vector) -> bool:
        """Insert a vector; return True if it increased the rank."""
        index = self.count
        self.count += 1
        combo = {index: CyclotomicNumber.rational(1)} if self.track else None
        v, combo = self._reduce_full(dict(v), combo)
        if not v:
            if self.track:
                self.dependencies.append(combo)
            return False
        pivot = min(v)
        inv = v[pivot].inverse()
        v = scale_vector(v, inv)
        if combo is not None:
            combo = scale_vector(combo, inv)
        for col, row in self.rows.items():
            c = row.get(pivot)
            if c is not None:
                add_scaled(row, v, -c)
                if combo is not None:
                    add_scaled(self.combos[col], combo, -c)
        self.rows[pivot] = v
        if combo is not None:
            self.combos[pivot] = combo
        return True

    def contains(self, v: Vector) -> bool:
        r, _ = self._reduce_full(dict(v), None)
        return not r

    def express(self, v: Vector) -> Vector | None:
        """Coefficients over the inserted vectors giving v, or None."""
        if not self.track:
            raise ValueError("echelon form was built without tracking")
        r, combo = self._reduce_full(dict(v), {})
        if r:
            return None
        # v - sum c_i rows = 0 with combo = -(sum c_i combos)
        return scale_vector(combo, -1)

    def basis(self) -> list[Vector]:
        return [self.rows[c] for c in sorted(self.rows)]

    def pivots(self) -> list[int]:
        return sorted(self.rows)


@dataclass
class Subspace:
    """A subspace of F^ambient with a reduced echelon basis."""

    ambient: int
    basis: list[Vector]
    pivots: list[int] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Vector) -> list[CyclotomicNumber] | None:
        """Coordinates of v in the echelon basis, or None if v is outside."""
        v = dict(v)
        coords = []
        for p, b in zip(self.pivots, self.basis):
            c = v.get(p, CyclotomicNumber.rational(0))
            coords.append(c)
            if not c.is_zero():
                add_scaled(v, b, -c)
        return None if v else coords

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.pivots == other.pivots
                and all(a == b for a, b in zip(self.basis, other.basis)))

    def __le__(self, other: Subspace) -> bool:
        return all(other.contains(b) for b in self.basis)


def span(vectors: Iterable[Vector], ambient: int) -> Subspace:
    vectors = sorted((clean(v) for v in vectors), key=len)
    ech = Echelon()
    for v in vectors:
        if v:
            ech.insert(v)
    return Subspace(ambient, ech.basis(), ech.pivots())


def rank(rows: Iterable[Vector]) -> int:
    ech = Echelon()
    for v in sorted((clean(r) for r in rows), key=len):
        if v:
            ech.insert(v)
    return ech.rank


def transpose(rows: Sequence[Vector]) -> dict[int, Vector]:
    cols: dict[int, Vector] = {}
    for i, r in enumerate(rows):
        for j, x in r.items():
            cols.setdefault(j, {})[i] = x
    return cols


def nullspace(rows: Sequence[Vector], ncols: int) -> Subspace:
    """Right nullspace {x : rows . x = 0} inside F^ncols."""
    ech = Echelon()
    for r in sorted((clean(r) for r in rows), key=len):
        if r:
            ech.insert(r)
    pivots = set(ech.rows)
    basis: list[Vector] = []
    one = CyclotomicNumber.rational(1)
    for free in range(ncols):
        if free in pivots:
            continue
        v: Vector = {free: one}
        for p, row in ech.rows.items():
            c = row.get(free)
            if c is not None:
                v[p] = -c
        basis.append(v)
    return span(basis, ncols)


def left_nullspace(columns: Sequence[Vector], nvectors: int | None = None) -> Subspace:
    """Relations {lambda : sum lambda_i columns[i] = 0}."""
    n = len(columns) if nvectors is None else nvectors
    rows = transpose(columns)
    return nullspace(list(rows.values()), n)


def solve(rows: Sequence[Vector], b: Vector, ncols: int) -> Vector | None:
    """A particular solution x of rows . x = b, or None."""
    aug_col = ncols
    ech = Echelon()
    for i, r in enumerate(rows):
        row = dict(clean(r))
        bi = b.get(i)
        if bi is not None and not cyc(bi).is_zero():
            row[aug_col] = cyc(bi)
        if row:
            ech.insert(row)
    if aug_col in ech.rows:
        return None
    x: Vector = {}
    for p, row in ech.rows.items():
        c = row.get(aug_col)
        if c is not None:
            x[p] = c
    return x


def solve_dense(rows: list[list], rhs: list) -> list | None:
    """Dense Gauss-Jordan over Fraction (or any field type); used internally."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if a[i][m]:
            return None
    x = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        x[c] = a[i][m]
    return x


def intersect(u: Subspace, w: Subspace) -> Subspace:
    if u.ambient != w.ambient:
        raise ValueError("ambient dimensions differ")
    if not u.basis or not w.basis:
        return Subspace(u.ambient, [], [])
    # columns u_i and -w_j; a kernel vector (alpha, beta) gives sum alpha_i u_i
    cols = list(u.basis) + [scale_vector(v, -1) for v in w.basis]
    kernel = left_nullspace(cols)
    vectors = []
    nu = len(u.basis)
    for k in kernel.basis:
        v: Vector = {}
        for i, c in k.items():
            if i < nu:
                add_scaled(v, u.basis[i], c)
        vectors.append(v)
    return span(vectors, u.ambient)


def determinant(matrix: Sequence[Sequence]) -> CyclotomicNumber:
    n = len(matrix)
    a = [[cyc(x) for x in row] for row in matrix]
    det = CyclotomicNumber.rational(1)
    for c in range(n):
        p = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if p is None:
            return CyclotomicNumber.rational(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det
