"""Prime field arithmetic.

Elements are plain Python ints in ``[0, p)``; :class:`Field` carries the
modulus and the operations. :class:`Elem` is a thin operator-overloading
wrapper for interactive use.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CompositeModulus, InvalidParams, ZeroInverse

MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    """Trial division; adequate for n < 2**31."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def smallest_prime_at_least(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class Field:
    p: int

    def __post_init__(self):
        if self.p < 2 or self.p >= MAX_MODULUS:
            raise InvalidParams(f"modulus must satisfy 2 <= p < 2**31, got {self.p}")
        if not is_prime(self.p):
            raise CompositeModulus(f"{self.p} is not prime")

    @property
    def q(self) -> int:
        return self.p

    def __call__(self, value: int) -> "Elem":
        return Elem(value % self.p, self)

    def __iter__(self):
        return iter(range(self.p))

    def __len__(self):
        return self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def arith(self, a: int, b: int, op: str) -> int:
        try:
            fn = {"add": self.add, "sub": self.sub, "mul": self.mul}[op]
        except KeyError:
            raise ValueError(f"unknown op {op!r}") from None
        return fn(a, b)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        # Fermat: a^(p-2) = a^-1
        return self.pow(a, self.p - 2)

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply. ``0**0 == 1``."""
        if e < 0:
            raise ValueError("negative exponent")
        result, base = 1, a % self.p
        while e:
            if e & 1:
                result = result * base % self.p
            base = base * base % self.p
            e >>= 1
        return result % self.p

    def power_sum(self, c: int) -> int:
        """Sum of alpha**c over every alpha in the field."""
        return sum(self.pow(a, c) for a in range(self.p)) % self.p


def make_field(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class Elem:
    value: int
    field: Field

    def _coerce(self, other) -> int:
        if isinstance(other, Elem):
            if other.field != self.field:
                raise ValueError("elements from different fields")
            return other.value
        return other % self.field.p

    def __add__(self, other):
        return Elem(self.field.add(self.value, self._coerce(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return Elem(self.field.sub(self.value, self._coerce(other)), self.field)

    def __rsub__(self, other):
        return Elem(self.field.sub(self._coerce(other), self.value), self.field)

    def __mul__(self, other):
        return Elem(self.field.mul(self.value, self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return Elem(self.field.neg(self.value), self.field)

    def __truediv__(self, other):
        return self * Elem(self.field.inv(self._coerce(other)), self.field)

    def __pow__(self, e: int):
        return Elem(self.field.pow(self.value, e), self.field)

    def inverse(self) -> "Elem":
        return Elem(self.field.inv(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"
