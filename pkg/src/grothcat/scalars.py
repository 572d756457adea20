"""Exact coefficient fields: the rationals and prime fields GF(p)."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import InputError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@total_ordering
class GF:
    """Element of the prime field Z/p, stored as an int in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> int | None:
        if isinstance(other, GF):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return GF(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GF(o, self.p) / self

    def __neg__(self):
        return GF(-self.value, self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.value == o

    def __lt__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.value < o

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"GF({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """Descriptor shared by every scalar of one computation."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p

    @classmethod
    def parse(cls, text: str) -> Field:
        text = text.strip()
        if text in ("rational", "QQ", "Q"):
            return cls()
        if text.startswith("fp:"):
            try:
                return cls(int(text[3:]))
            except ValueError:
                raise InputError(f"bad field descriptor {text!r}") from None
        raise InputError(f"bad field descriptor {text!r}")

    def __str__(self):
        return "rational" if self.p is None else f"fp:{self.p}"

    def __repr__(self):
        return f"Field({self.p})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __call__(self, x):
        if isinstance(x, str):
            try:
                x = Fraction(x)
            except ValueError:
                raise InputError(f"bad scalar {x!r}") from None
        if self.p is None:
            if isinstance(x, GF):
                raise ValueError("prime-field element in a rational computation")
            return Fraction(x)
        if isinstance(x, GF):
            if x.p != self.p:
                raise ValueError("mixing different prime fields")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise InputError(f"{x} is not defined modulo {self.p}")
            return GF(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return GF(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)


RATIONAL = Field()


def format_scalar(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)
