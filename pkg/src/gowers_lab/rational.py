"""Exact rational points of the circle R/Z."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class UnitRational:
    """An element ``num/den mod 1`` with ``0 <= num < den`` and gcd 1.

    Arbitrary precision; closed under addition, negation and integer scaling.
    """

    __slots__ = ("_frac",)

    def __init__(self, num: int | Fraction | "UnitRational" = 0, den: int = 1):
        if isinstance(num, UnitRational):
            frac = num._frac
        elif isinstance(num, Fraction):
            frac = num / den
        else:
            if den == 0:
                raise ZeroDivisionError("denominator must be nonzero")
            frac = Fraction(int(num), int(den))
        object.__setattr__(self, "_frac", frac - (frac.numerator // frac.denominator))

    def __setattr__(self, name, value):
        raise AttributeError("UnitRational is immutable")

    @classmethod
    def parse(cls, text: str) -> "UnitRational":
        text = text.strip()
        if "/" in text:
            a, b = text.split("/", 1)
            return cls(int(a), int(b))
        return cls(int(text))

    @property
    def num(self) -> int:
        return self._frac.numerator

    @property
    def den(self) -> int:
        return self._frac.denominator

    def as_fraction(self) -> Fraction:
        return self._frac

    def __add__(self, other):
        if isinstance(other, UnitRational):
            return UnitRational(self._frac + other._frac)
        if isinstance(other, (int, Rational)):
            return UnitRational(self._frac + Fraction(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return UnitRational(-self._frac)

    def __sub__(self, other):
        if isinstance(other, UnitRational):
            return UnitRational(self._frac - other._frac)
        if isinstance(other, (int, Rational)):
            return UnitRational(self._frac - Fraction(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, n):
        # only integer scaling is well defined on R/Z
        if isinstance(n, int) and not isinstance(n, bool):
            return UnitRational(self._frac * n)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, UnitRational):
            return self._frac == other._frac
        if isinstance(other, (int, Fraction)):
            return self._frac == UnitRational(other)._frac
        return NotImplemented

    def __hash__(self):
        return hash(("UnitRational", self._frac))

    def __bool__(self):
        return self._frac != 0

    def __float__(self):
        return float(self._frac)

    def __repr__(self):
        return f"UnitRational({self.num}, {self.den})"

    def __str__(self):
        return f"{self.num}/{self.den}" if self.den != 1 else "0"

    def __reduce__(self):
        return (UnitRational, (self.num, self.den))


ZERO = UnitRational(0)
