"""Arithmetic in GF(p) and GF(p^2) for primes p >= 5.

Elements are stored as integers: ``c0 + c1*p`` encodes ``c0 + c1*T`` where
``T^2 = nu`` and ``nu`` is the least quadratic non-residue mod p.  Every
operation on :class:`GF` accepts plain ints or numpy integer arrays, so the
same code serves scalar bookkeeping and bulk point evaluation.
:class:`FieldElement` is a thin operator-overloading wrapper for scalar use.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (
    CompositeP,
    DivisionByZero,
    FieldTooLarge,
    NotASquare,
    UnsupportedCharacteristic,
    UnsupportedDegree,
)

DEFAULT_MAX_ORDER = 2**16
TABLE_MAX_ORDER = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def least_nonresidue(p: int) -> int:
    squares = {x * x % p for x in range(1, p)}
    return next(v for v in range(2, p) if v not in squares)


class GF:
    """The finite field of order ``p**h`` (h in {1, 2})."""

    def __init__(self, p: int, h: int = 1, max_order: int = DEFAULT_MAX_ORDER):
        if h not in (1, 2):
            raise UnsupportedDegree(f"extension degree {h} not supported (use 1 or 2)")
        if not is_prime(p):
            raise CompositeP(f"{p} is not prime")
        if p in (2, 3):
            raise UnsupportedCharacteristic(f"characteristic {p} is out of scope")
        if p**h > max_order:
            raise FieldTooLarge(f"q = {p}^{h} exceeds the configured cap {max_order}")
        self.p = p
        self.h = h
        self.q = p**h
        if h == 1:
            self.nonresidue = None
            self.modulus = (0, 1)
        else:
            self.nonresidue = least_nonresidue(p)
            self.modulus = ((-self.nonresidue) % p, 0, 1)
            # no root of T^2 - nu in GF(p)
            assert all((t * t - self.nonresidue) % p for t in range(p))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.h})" if self.h > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.h) == (other.p, other.h)

    def __hash__(self) -> int:
        return hash((self.p, self.h))

    def describe(self) -> dict:
        return {"p": self.p, "h": self.h, "modulus": list(self.modulus)}

    # -- element construction -------------------------------------------
    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"encoding {value} out of range for {self}")
        return FieldElement(self, value)

    def from_int(self, n: int) -> int:
        """Encoding of the integer ``n`` viewed in the prime subfield."""
        return n % self.p

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.h:
            raise ValueError(f"expected {self.h} coefficients")
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def coeffs(self, x: int) -> tuple[int, ...]:
        x = int(x)
        return tuple((x // self.p**i) % self.p for i in range(self.h))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        """All elements in encoding order (0 first, then 1)."""
        return [FieldElement(self, v) for v in range(self.q)]

    # -- arithmetic on encodings (ints or arrays) ---------------------------
    def add(self, a, b):
        p = self.p
        if self.h == 1:
            return (a + b) % p
        return (a % p + b % p) % p + ((a // p + b // p) % p) * p

    def neg(self, a):
        p = self.p
        if self.h == 1:
            return (-a) % p
        return (-(a % p)) % p + ((-(a // p)) % p) * p

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p = self.p
        if self.h == 1:
            return (a * b) % p
        a0, a1 = a % p, a // p
        b0, b1 = b % p, b // p
        c0 = (a0 * b0 + self.nonresidue * (a1 * b1 % p)) % p
        c1 = (a0 * b1 + a1 * b0) % p
        return c0 + c1 * p

    def inv(self, a):
        if np.isscalar(a) or isinstance(a, int):
            if int(a) == 0:
                raise DivisionByZero("inverse of zero")
            return int(self.inv_table[int(a)])
        a = np.asarray(a)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def dot(self, u, v):
        """Dot product along the last axis."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.h == 1:
            return (u * v).sum(axis=-1) % self.p
        prods = self.mul(u, v)
        out = np.zeros(np.broadcast_shapes(u.shape, v.shape)[:-1], dtype=np.int64)
        for k in range(prods.shape[-1]):
            out = self.add(out, prods[..., k])
        return out

    # -- lookup tables --------------------------------------------------
    @cached_property
    def inv_table(self) -> np.ndarray:
        x = np.arange(self.q, dtype=np.int64)
        # x^(q-2) by square-and-multiply over all elements at once
        result = np.ones(self.q, dtype=np.int64)
        base, e = x.copy(), self.q - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        result[0] = 0
        return result

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg, inv) tables for compiled kernels."""
        if self.q > TABLE_MAX_ORDER:
            raise FieldTooLarge(f"lookup tables limited to q <= {TABLE_MAX_ORDER}")
        x = np.arange(self.q, dtype=np.int64)
        add = self.add(x[:, None], x[None, :]).astype(np.int64)
        mul = self.mul(x[:, None], x[None, :]).astype(np.int64)
        return add, mul, self.neg(x).astype(np.int64), self.inv_table

    @cached_property
    def _sqrt_table(self) -> np.ndarray:
        x = np.arange(self.q, dtype=np.int64)
        sq = self.mul(x, x)
        roots = np.full(self.q, self.q, dtype=np.int64)
        np.minimum.at(roots, sq, x)
        roots[roots == self.q] = -1
        return roots

    def is_square(self, a: int) -> bool:
        return bool(self._sqrt_table[int(a)] >= 0)

    def sqrt(self, a: int, other_root: bool = False) -> int:
        """Square root with the smaller encoding, or its negative if ``other_root``."""
        r = int(self._sqrt_table[int(a)])
        if r < 0:
            raise NotASquare(f"{self.format(a)} is not a square in {self}")
        return int(self.neg(r)) if other_root and r else r

    def cube_roots_of_unity(self) -> list[int]:
        return [x for x in range(1, self.q) if self.pow(x, 3) == 1]

    def format(self, a: int) -> str:
        if self.h == 1:
            return str(int(a))
        c0, c1 = self.coeffs(a)
        return f"{c0}+{c1}T" if c1 else str(c0)


def make_field(p: int, h: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> GF:
    return GF(p, h, max_order)


def field_of_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> GF:
    """The field GF(q) for q = p or q = p^2."""
    if q < 2:
        raise CompositeP(f"{q} is not a prime power")
    d = next(k for k in range(2, q + 1) if q % k == 0)
    if d in (2, 3):
        raise UnsupportedCharacteristic(f"q = {q} has characteristic {d}")
    if q == d:
        return GF(d, 1, max_order)
    if q == d * d:
        return GF(d, 2, max_order)
    e, r = 0, q
    while r % d == 0:
        r //= d
        e += 1
    if r == 1:
        raise UnsupportedDegree(f"q = {d}^{e} needs extension degree {e}")
    raise CompositeP(f"{q} is not a prime power")


class FieldElement:
    """Scalar element of a :class:`GF` with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        self.field = field
        self.value = int(value)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements from different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def _wrap(self, v) -> FieldElement:
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def sqrt(self, other_root: bool = False) -> FieldElement:
        return self._wrap(self.field.sqrt(self.value, other_root))

    def is_square(self) -> bool:
        return self.field.is_square(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.h, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field.format(self.value)} in {self.field}"
