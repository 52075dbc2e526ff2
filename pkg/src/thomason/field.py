"""Exact coefficient fields: the rationals and prime fields F_p."""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _co(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._co(other)
        return NotImplemented if o is NotImplemented else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class Field:
    """A coefficient field; ``Field.rationals()`` or ``Field.prime(p)``.

    Elements are :class:`fractions.Fraction` for Q and :class:`Fp` for F_p.
    Calling the field coerces ints, fractions and numeric strings.
    """

    def __init__(self, characteristic: int = 0):
        if characteristic and not _is_prime(characteristic):
            raise ValueError("characteristic %d is not prime" % characteristic)
        self.characteristic = characteristic
        self.zero = self(0)
        self.one = self(1)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"Q"`` or ``"Fp:<p>"``."""
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls.rationals()
        if t.startswith("Fp:") or t.startswith("GF:"):
            return cls.prime(int(t.split(":", 1)[1]))
        raise ValueError("unknown field %r (expected 'Q' or 'Fp:<p>')" % text)

    def __call__(self, value):
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fp):
                raise ValueError("cannot coerce an F_p element into Q")
            return Fraction(value)
        if isinstance(value, Fp):
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError("denominator vanishes in F_%d" % p)
            return Fp(value.numerator * pow(value.denominator, -1, p), p)
        return Fp(int(value), p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __str__(self):
        return "Q" if self.characteristic == 0 else "Fp:%d" % self.characteristic

    __repr__ = __str__

    def format(self, c) -> str:
        if self.characteristic:
            return str(c.v if isinstance(c, Fp) else int(c) % self.characteristic)
        return str(Fraction(c))

    # matrices are numpy object arrays holding field elements

    def zeros(self, m: int, n: int) -> np.ndarray:
        a = np.empty((m, n), dtype=object)
        a.fill(self.zero)
        return a

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.one
        return a

    def matrix(self, rows, shape=None) -> np.ndarray:
        rows = [list(r) for r in rows]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        a = self.zeros(*shape)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                a[i, j] = self(v)
        return a
