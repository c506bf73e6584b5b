"""Exact coefficient fields: the rationals and prime fields GF(p).

Every coefficient in the engine is either a ``fractions.Fraction`` or an
``FpElement``; both support +, -, *, /, unary minus, equality with 0 and
truthiness, so all polynomial code is field-generic.  No floating point
appears anywhere.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class RationalField:
    """The field of rational numbers, with Fraction elements."""

    kind = "rationals"

    def __call__(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into the rationals")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("rationals")


QQ = RationalField()


class FpElement:
    """An element of GF(p), stored as a canonical residue in [0, p)."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: "PrimeField"):
        self.value = value % field.p
        self.field = field

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.field.p != self.field.p:
                raise ValueError("mixed prime moduli")
            return other
        if isinstance(other, int):
            return FpElement(other, self.field)
        if isinstance(other, Fraction):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.value + other.value, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.value - other.value, self.field)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(other.value - self.value, self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement(self.value * other.value, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.value == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return FpElement(self.value * pow(other.value, -1, self.field.p), self.field)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return FpElement(-self.value, self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FpElement):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return str(self.value)


class PrimeField:
    """GF(p) for a prime modulus p (default engine choice is p = 32003)."""

    kind = "prime-field"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def __call__(self, value) -> FpElement:
        if isinstance(value, FpElement):
            if value.field.p != self.p:
                raise ValueError("mixed prime moduli")
            return value
        if isinstance(value, int):
            return FpElement(value, self)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return FpElement(
                value.numerator * pow(value.denominator, -1, self.p), self
            )
        if isinstance(value, str):
            return self(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} into GF({self.p})")

    @property
    def zero(self) -> FpElement:
        return FpElement(0, self)

    @property
    def one(self) -> FpElement:
        return FpElement(1, self)

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("prime-field", self.p))


DEFAULT_PRIME = 32003
