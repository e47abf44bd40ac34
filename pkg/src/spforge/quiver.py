"""Finite quivers, paths and elements of the path algebra.

A path a_r ... a_1 is stored head-side first: ``arrows[0]`` is a_r, the last
arrow traversed.  The product p*q is the concatenation pq when h(q) = t(p) and
zero otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .cyclotomic import ONE, CyclotomicNumber, cyc
from .expr import Builder, ParseError, parse as _parse
from .linalg import Vector


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: int
    head: int


@dataclass(frozen=True, order=True)
class Path:
    """A path; ``arrows`` holds arrow indices head-side first."""

    arrows: tuple[int, ...]
    head: int
    tail: int

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def is_closed(self) -> bool:
        return self.head == self.tail


class Quiver:
    def __init__(self, vertices: Sequence[str] | int, arrows: Iterable[tuple[str, object, object]] = ()):
        if isinstance(vertices, int):
            vertices = [str(i) for i in range(vertices)]
        self.vertices: list[str] = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrows: list[Arrow] = []
        self._aindex: dict[str, int] = {}
        for name, tail, head in arrows:
            if name in self._aindex:
                raise ValueError(f"duplicate arrow name {name!r}")
            if name in ("e", "z"):
                raise ValueError(f"arrow name {name!r} is reserved")
            self._aindex[name] = len(self.arrows)
            self.arrows.append(Arrow(name, self.vertex(tail), self.vertex(head)))
        self._paths: dict[int, list[Path]] = {}

    # lookup ---------------------------------------------------------------
    def vertex(self, v) -> int:
        if isinstance(v, int) and not isinstance(v, bool):
            if 0 <= v < len(self.vertices):
                return v
            raise KeyError(f"no vertex {v}")
        key = str(v)
        if key not in self._vindex:
            raise KeyError(f"unknown vertex {key!r}")
        return self._vindex[key]

    def arrow_index(self, name: str) -> int:
        if name not in self._aindex:
            raise KeyError(f"unknown arrow {name!r}")
        return self._aindex[name]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def out_arrows(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.tail == v]

    def in_arrows(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.head == v]

    def arrow_count(self, tail: int, head: int) -> int:
        return sum(1 for a in self.arrows if a.tail == tail and a.head == head)

    # paths ----------------------------------------------------------------
    def trivial(self, v) -> Path:
        i = self.vertex(v)
        return Path((), i, i)

    def arrow_path(self, a: int) -> Path:
        arr = self.arrows[a]
        return Path((a,), arr.head, arr.tail)

    def path(self, *names: str) -> Path:
        """Path from arrow names listed head-side first."""
        if not names:
            raise ValueError("use trivial() for trivial paths")
        idx = tuple(self.arrow_index(n) for n in names)
        for left, right in zip(idx, idx[1:]):
            if self.arrows[right].head != self.arrows[left].tail:
                raise ValueError(f"arrows {self.arrows[left].name} and "
                                 f"{self.arrows[right].name} are not composable")
        return Path(idx, self.arrows[idx[0]].head, self.arrows[idx[-1]].tail)

    def from_arrows(self, idx: Sequence[int]) -> Path:
        idx = tuple(idx)
        return Path(idx, self.arrows[idx[0]].head, self.arrows[idx[-1]].tail)

    def compose(self, p: Path, q: Path) -> Path | None:
        """pq, or None when h(q) != t(p)."""
        if q.head != p.tail:
            return None
        return Path(p.arrows + q.arrows, p.head, q.tail)

    def sort_key(self, p: Path):
        return (len(p), tuple(self.arrows[a].name for a in p.arrows), p.head)

    def enumerate_paths(self, length: int, tail=None, head=None) -> list[Path]:
        """All paths of a given length in lexicographic order of arrow names."""
        if length < 0:
            return []
        if length not in self._paths:
            if length == 0:
                paths = [Path((), v, v) for v in range(self.num_vertices)]
            elif length == 1:
                paths = [self.arrow_path(a) for a in range(len(self.arrows))]
            else:
                shorter = self.enumerate_paths(length - 1)
                paths = [Path((a,) + q.arrows, arr.head, q.tail)
                         for a, arr in enumerate(self.arrows) for q in shorter if q.head == arr.tail]
            paths.sort(key=self.sort_key)
            self._paths[length] = paths
        out = self._paths[length]
        if tail is not None:
            t = self.vertex(tail)
            out = [p for p in out if p.tail == t]
        if head is not None:
            h = self.vertex(head)
            out = [p for p in out if p.head == h]
        return out

    def format_path(self, p: Path) -> str:
        if p.is_trivial:
            return f"e({self.vertices[p.head]})"
        return ".".join(self.arrows[a].name for a in p.arrows)

    def parse_path(self, text: str) -> Path:
        text = text.strip()
        if text.startswith("e(") and text.endswith(")"):
            return self.trivial(text[2:-1].strip())
        return self.path(*text.split("."))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self) -> int:
        return hash((tuple(self.vertices), tuple(self.arrows)))

    def __repr__(self) -> str:
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def compose(quiver: Quiver, p: Path, q: Path) -> Path | None:
    return quiver.compose(p, q)


def enumerate_paths(quiver: Quiver, length: int, tail=None, head=None) -> list[Path]:
    return quiver.enumerate_paths(length, tail, head)


class PathAlgebraElement:
    """A finite linear combination of paths with cyclotomic coefficients."""

    __slots__ = ("quiver", "terms")

    def __init__(self, quiver: Quiver, terms: Mapping[Path, object] | None = None):
        self.quiver = quiver
        self.terms: dict[Path, CyclotomicNumber] = {}
        if terms:
            for p, c in terms.items():
                c = cyc(c)
                if not c.is_zero():
                    self.terms[p] = c

    @classmethod
    def _raw(cls, quiver: Quiver, terms: dict[Path, CyclotomicNumber]) -> PathAlgebraElement:
        obj = object.__new__(cls)
        obj.quiver = quiver
        obj.terms = terms
        return obj

    @classmethod
    def from_path(cls, quiver: Quiver, p: Path, coeff=ONE) -> PathAlgebraElement:
        return cls(quiver, {p: coeff})

    @classmethod
    def zero(cls, quiver: Quiver) -> PathAlgebraElement:
        return cls._raw(quiver, {})

    @classmethod
    def one(cls, quiver: Quiver) -> PathAlgebraElement:
        return cls(quiver, {quiver.trivial(v): ONE for v in range(quiver.num_vertices)})

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, p: Path) -> CyclotomicNumber:
        return self.terms.get(p, CyclotomicNumber.rational(0))

    def support(self) -> list[Path]:
        return sorted(self.terms, key=self.quiver.sort_key)

    def lengths(self) -> set[int]:
        return {len(p) for p in self.terms}

    @property
    def degree(self) -> int:
        return max((len(p) for p in self.terms), default=-1)

    def is_homogeneous(self, n: int | None = None) -> bool:
        ls = self.lengths()
        if n is None:
            return len(ls) <= 1
        return ls <= {n}

    def homogeneous_part(self, n: int) -> PathAlgebraElement:
        return PathAlgebraElement._raw(self.quiver, {p: c for p, c in self.terms.items() if len(p) == n})

    # arithmetic -----------------------------------------------------------
    def _check(self, other: PathAlgebraElement) -> None:
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise ValueError("elements live over different quivers")

    def _lift(self, other) -> PathAlgebraElement | None:
        if isinstance(other, PathAlgebraElement):
            self._check(other)
            return other
        try:
            c = cyc(other)
        except TypeError:
            return None
        return PathAlgebraElement.one(self.quiver) * c

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for p, c in o.terms.items():
            cur = terms.get(p)
            new = c if cur is None else cur + c
            if new.is_zero():
                terms.pop(p, None)
            else:
                terms[p] = new
        return PathAlgebraElement._raw(self.quiver, terms)

    __radd__ = __add__

    def __neg__(self):
        return PathAlgebraElement._raw(self.quiver, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, PathAlgebraElement):
            self._check(other)
            return multiply(self, other)
        try:
            c = cyc(other)
        except TypeError:
            return NotImplemented
        if c.is_zero():
            return PathAlgebraElement.zero(self.quiver)
        return PathAlgebraElement._raw(self.quiver, {p: x * c for p, x in self.terms.items()})

    def __rmul__(self, other):
        try:
            c = cyc(other)
        except TypeError:
            return NotImplemented
        return self * c

    def __truediv__(self, other):
        try:
            c = cyc(other)
        except TypeError:
            return NotImplemented
        return self * c.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = PathAlgebraElement.one(self.quiver)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, PathAlgebraElement):
            return self.terms == other.terms
        try:
            c = cyc(other)
        except TypeError:
            return NotImplemented
        if c.is_zero():
            return not self.terms
        return self == PathAlgebraElement.one(self.quiver) * c

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # derivatives ----------------------------------------------------------
    def left_derivative(self, q: Path) -> PathAlgebraElement:
        return left_derivative(q, self)

    def right_derivative(self, q: Path) -> PathAlgebraElement:
        return right_derivative(q, self)

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"PathAlgebraElement({self})"


def multiply(x: PathAlgebraElement, y: PathAlgebraElement) -> PathAlgebraElement:
    terms: dict[Path, CyclotomicNumber] = {}
    by_head: dict[int, list[tuple[Path, CyclotomicNumber]]] = {}
    for q, d in y.terms.items():
        by_head.setdefault(q.head, []).append((q, d))
    for p, c in x.terms.items():
        for q, d in by_head.get(p.tail, ()):
            r = Path(p.arrows + q.arrows, p.head, q.tail)
            cur = terms.get(r)
            new = c * d if cur is None else cur + c * d
            if new.is_zero():
                terms.pop(r, None)
            else:
                terms[r] = new
    return PathAlgebraElement._raw(x.quiver, terms)


def left_derivative(q: Path, x: PathAlgebraElement) -> PathAlgebraElement:
    """delta_q x: strip q from the head side of every term (p = q t gives t)."""
    n = len(q)
    terms: dict[Path, CyclotomicNumber] = {}
    for p, c in x.terms.items():
        if n == 0:
            if p.head == q.head:
                terms[p] = c
            continue
        if len(p) >= n and p.arrows[:n] == q.arrows:
            if len(p) == n:
                t = Path((), q.tail, q.tail)
            else:
                t = Path(p.arrows[n:], x.quiver.arrows[p.arrows[n]].head, p.tail)
            terms[t] = c
    return PathAlgebraElement._raw(x.quiver, terms)


def right_derivative(q: Path, x: PathAlgebraElement) -> PathAlgebraElement:
    """x delta'_q: strip q from the tail side of every term (p = t q gives t)."""
    n = len(q)
    terms: dict[Path, CyclotomicNumber] = {}
    for p, c in x.terms.items():
        if n == 0:
            if p.tail == q.tail:
                terms[p] = c
            continue
        if len(p) >= n and p.arrows[len(p) - n:] == q.arrows:
            if len(p) == n:
                t = Path((), q.head, q.head)
            else:
                last = p.arrows[len(p) - n - 1]
                t = Path(p.arrows[:len(p) - n], p.head, x.quiver.arrows[last].tail)
            terms[t] = c
    return PathAlgebraElement._raw(x.quiver, terms)


def homogeneous_part(x: PathAlgebraElement, n: int) -> PathAlgebraElement:
    return x.homogeneous_part(n)


def format_element(x: PathAlgebraElement) -> str:
    if not x.terms:
        return "0"
    q = x.quiver
    parts = []
    for p in x.support():
        c = x.terms[p]
        name = q.format_path(p)
        if c.is_rational():
            r = c.coeffs[0]
            sign = "-" if r < 0 else "+"
            mag = abs(r)
            body = name if mag == 1 else f"{mag}*{name}"
        else:
            sign, body = "+", f"({c})*{name}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class _ElementBuilder(Builder):
    def __init__(self, quiver: Quiver):
        self.quiver = quiver

    def number(self, value: int):
        return CyclotomicNumber.rational(value)

    def zeta(self, order: int):
        from .cyclotomic import zeta
        return zeta(order)

    def trivial(self, vertex: str):
        return PathAlgebraElement.from_path(self.quiver, self.quiver.trivial(vertex))

    def path(self, names):
        return PathAlgebraElement.from_path(self.quiver, self.quiver.path(*names))


def parse_element(quiver: Quiver, text: str, *, source: str = "<input>", line: int = 1) -> PathAlgebraElement:
    value = _parse(text, _ElementBuilder(quiver), source=source, line=line)
    if isinstance(value, PathAlgebraElement):
        return value
    if isinstance(value, CyclotomicNumber):
        return PathAlgebraElement.one(quiver) * value
    raise ParseError("expression does not define a path algebra element", source=source, line=line)


class PathBasis:
    """Coordinates on the span of a fixed list of paths."""

    def __init__(self, quiver: Quiver, paths: Sequence[Path]):
        self.quiver = quiver
        self.paths = list(paths)
        self.index = {p: i for i, p in enumerate(self.paths)}

    def __len__(self) -> int:
        return len(self.paths)

    def to_vector(self, x: PathAlgebraElement) -> Vector:
        out = {}
        for p, c in x.terms.items():
            if p not in self.index:
                raise ValueError(f"path {self.quiver.format_path(p)} is outside the basis")
            out[self.index[p]] = c
        return out

    def from_vector(self, v: Mapping[int, object]) -> PathAlgebraElement:
        return PathAlgebraElement(self.quiver, {self.paths[i]: c for i, c in v.items()})

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)


def path_basis(quiver: Quiver, length: int) -> PathBasis:
    cache = quiver.__dict__.setdefault("_bases", {})
    if length not in cache:
        cache[length] = PathBasis(quiver, quiver.enumerate_paths(length))
    return cache[length]
