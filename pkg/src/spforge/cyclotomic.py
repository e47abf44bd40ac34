"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A number is stored in the power basis 1, z, ..., z^(phi(N)-1) modulo the N-th
cyclotomic polynomial, with rational coefficients.  Operands of different
orders are embedded into the field of the lcm of their orders.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

from .expr import Builder, parse as _parse

Scalar = Union["CyclotomicNumber", int, Fraction]


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _exact_divide(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _exact_divide(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coef = num[i + len(den) - 1] // den[-1]
        out[i] = coef
        for j, d in enumerate(den):
            num[i + j] -= coef * d
    assert not any(num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row m holds the power-basis coordinates of z^m for 0 <= m < 2n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(2 * n):
        rows.append(tuple(cur))
        # multiply by z and reduce
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"not a rational coefficient: {c!r}")


class CyclotomicNumber:
    __slots__ = ("order", "coeffs", "_key")

    def __init__(self, coeffs: Iterable = (0,), order: int = 1):
        coeffs = tuple(_to_fraction(c) for c in coeffs)
        deg = totient(order)
        if len(coeffs) != deg:
            raise ValueError(f"order {order} needs {deg} coefficients, got {len(coeffs)}")
        self.order = order
        self.coeffs = coeffs
        self._key = None

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...], order: int) -> CyclotomicNumber:
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._key = None
        return obj

    # construction ---------------------------------------------------------
    @classmethod
    def rational(cls, value, order: int = 1) -> CyclotomicNumber:
        deg = totient(order)
        return cls._raw((_to_fraction(value),) + (Fraction(0),) * (deg - 1), order)

    @classmethod
    def from_exponents(cls, terms: Mapping[int, object], order: int) -> CyclotomicNumber:
        """Reduce sum c_k z^k (any integer k) into canonical form."""
        acc: dict[int, Fraction] = {}
        for k, c in terms.items():
            c = _to_fraction(c)
            if c:
                m = k % order
                acc[m] = acc.get(m, Fraction(0)) + c
        return cls._reduce(acc, order)

    @classmethod
    def _reduce(cls, acc: Mapping[int, Fraction], order: int) -> CyclotomicNumber:
        deg = totient(order)
        out = [Fraction(0)] * deg
        table = _power_table(order)
        for m, c in acc.items():
            if not c:
                continue
            if m < deg:
                out[m] += c
            else:
                for j, t in enumerate(table[m]):
                    if t:
                        out[j] += c * t
        return cls._raw(tuple(out), order)

    # basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum((float(c) * z ** k for k, c in enumerate(self.coeffs) if c), 0j)

    # order changes --------------------------------------------------------
    def embed(self, order: int) -> CyclotomicNumber:
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot embed order {self.order} into order {order}")
        step = order // self.order
        return CyclotomicNumber._reduce({k * step: c for k, c in enumerate(self.coeffs) if c}, order)

    def in_order(self, order: int) -> CyclotomicNumber:
        """Express this number in Q(zeta_order), which must contain it."""
        if order == self.order:
            return self
        if self.is_rational():
            return CyclotomicNumber.rational(self.coeffs[0], order)
        big = math.lcm(order, self.order)
        target = self.embed(big)
        step = big // order
        deg = totient(order)
        columns = [CyclotomicNumber._reduce({k * step: Fraction(1)}, big).coeffs for k in range(deg)]
        from .linalg import solve_dense
        rows = [[columns[k][r] for k in range(deg)] for r in range(totient(big))]
        sol = solve_dense(rows, list(target.coeffs))
        if sol is None:
            raise ValueError(f"{self} does not lie in Q(z({order}))")
        return CyclotomicNumber._raw(tuple(sol), order)

    def minimal_form(self) -> CyclotomicNumber:
        """The same number written over the smallest possible order."""
        if self.is_rational():
            return CyclotomicNumber.rational(self.coeffs[0])
        for d in _divisors(self.order)[:-1]:
            try:
                return self.in_order(d)
            except ValueError:
                continue
        return self

    def _canon_key(self):
        if self._key is None:
            m = self.minimal_form()
            self._key = (m.order, m.coeffs)
        return self._key

    def __hash__(self) -> int:
        key = self._canon_key()
        if key[0] == 1:
            return hash(key[1][0])
        return hash(key)

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other) -> CyclotomicNumber | None:
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return CyclotomicNumber.rational(other)
        return None

    def _unify(self, other: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        if self.order == other.order:
            return self, other
        if other.order == 1:
            return self, CyclotomicNumber.rational(other.coeffs[0], self.order)
        if self.order == 1:
            return CyclotomicNumber.rational(self.coeffs[0], other.order), other
        big = math.lcm(self.order, other.order)
        return self.embed(big), other.embed(big)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        return CyclotomicNumber._raw(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), a.order)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(tuple(-x for x in self.coeffs), self.order)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order == 1 or self.order == 1:
            if o.order == 1:
                r, num = o.coeffs[0], self
            else:
                r, num = self.coeffs[0], o
            return CyclotomicNumber._raw(tuple(x * r for x in num.coeffs), num.order)
        a, b = self._unify(o)
        acc: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    acc[i + j] = acc.get(i + j, Fraction(0)) + x * y
        return CyclotomicNumber._reduce(acc, a.order)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CyclotomicNumber.rational(1 / self.coeffs[0], self.order)
        deg = totient(self.order)
        zpow = [CyclotomicNumber._reduce({j: Fraction(1)}, self.order) for j in range(deg)]
        cols = [(self * zj).coeffs for zj in zpow]
        rows = [[cols[j][r] for j in range(deg)] for r in range(deg)]
        from .linalg import solve_dense
        sol = solve_dense(rows, [Fraction(1)] + [Fraction(0)] * (deg - 1))
        assert sol is not None
        return CyclotomicNumber._raw(tuple(sol), self.order)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CyclotomicNumber.rational(1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> CyclotomicNumber:
        n = self.order
        return CyclotomicNumber.from_exponents({(-k) % n: c for k, c in enumerate(self.coeffs) if c}, n)

    def galois(self, t: int) -> CyclotomicNumber:
        """Apply z -> z^t (t coprime to the order)."""
        n = self.order
        if math.gcd(t, n) != 1:
            raise ValueError("Galois exponent must be coprime to the order")
        return CyclotomicNumber.from_exponents({(k * t) % n: c for k, c in enumerate(self.coeffs) if c}, n)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        return a.coeffs == b.coeffs

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        return _format_terms(self)

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self})"


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_terms(x: CyclotomicNumber) -> str:
    parts: list[str] = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        if k == 0:
            body = _format_rational(abs(c))
        else:
            power = f"z({x.order})" if k == 1 else f"z({x.order})^{k}"
            body = power if abs(c) == 1 else f"{_format_rational(abs(c))}*{power}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def zeta(order: int, power: int = 1) -> CyclotomicNumber:
    return CyclotomicNumber.from_exponents({power: 1}, order)


def cyc(value) -> CyclotomicNumber:
    """Coerce an int, Fraction or CyclotomicNumber."""
    if isinstance(value, CyclotomicNumber):
        return value
    return CyclotomicNumber.rational(value)


ZERO = CyclotomicNumber.rational(0)
ONE = CyclotomicNumber.rational(1)


class _ScalarBuilder(Builder):
    def number(self, value: int):
        return CyclotomicNumber.rational(value)

    def zeta(self, order: int):
        return zeta(order)

    def trivial(self, vertex: str):
        raise ValueError("paths are not allowed in a scalar expression")

    def path(self, names):
        raise ValueError(f"unknown name {'.'.join(names)!r} in scalar expression")


def parse_scalar(text: str, *, source: str = "<input>", line: int = 1) -> CyclotomicNumber:
    return _parse(text, _ScalarBuilder(), source=source, line=line)
