"""Exact half-integers, stored as a doubled integer."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral


@dataclass(frozen=True, order=True)
class HalfInt:
    """The value ``doubled / 2``.

    Sums and negations stay exact.  Multiplication is only defined by
    integers and by one half (see :meth:`half`), which is all index
    bookkeeping ever needs.
    """

    doubled: int

    def __post_init__(self):
        if not isinstance(self.doubled, Integral):
            raise TypeError(f"HalfInt needs an integer, got {self.doubled!r}")
        object.__setattr__(self, "doubled", int(self.doubled))

    @classmethod
    def of(cls, value) -> HalfInt:
        """Build from an int, a HalfInt, or a Fraction with denominator 1 or 2."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, Integral):
            return cls(2 * int(value))
        frac = Fraction(value)
        if frac.denominator not in (1, 2):
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(frac * 2))

    @classmethod
    def from_num_den(cls, num: int, den: int) -> HalfInt:
        if den == 1:
            return cls(2 * num)
        if den == 2:
            return cls(num)
        raise ValueError(f"denominator must be 1 or 2, got {den}")

    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def half(self) -> HalfInt:
        """Exactly half of an integer-valued HalfInt."""
        if not self.is_integer():
            raise ValueError(f"half of {self} is not a half-integer")
        return HalfInt(self.doubled // 2)

    @property
    def num(self) -> int:
        return self.doubled // 2 if self.is_integer() else self.doubled

    @property
    def den(self) -> int:
        return 1 if self.is_integer() else 2

    def to_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_json(cls, obj: dict) -> HalfInt:
        return cls.from_num_den(int(obj["num"]), int(obj["den"]))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return HalfInt(self.doubled + other.doubled)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return HalfInt(self.doubled - other.doubled)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return HalfInt(other.doubled - self.doubled)

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __mul__(self, k):
        if isinstance(k, Integral):
            return HalfInt(self.doubled * int(k))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.doubled == other.doubled

    def __hash__(self):
        return hash(("HalfInt", self.doubled))

    def __float__(self):
        return self.doubled / 2

    def __str__(self):
        if self.is_integer():
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def _coerce(value):
    if isinstance(value, HalfInt):
        return value
    if isinstance(value, Integral):
        return HalfInt(2 * int(value))
    if isinstance(value, Fraction) and value.denominator in (1, 2):
        return HalfInt(int(value * 2))
    return NotImplemented


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)


def hsum(values) -> HalfInt:
    total = ZERO
    for v in values:
        total = total + v
    return total
