"""Exact Gaussian rationals, the coefficient field Q(i)."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot build an exact rational from {type(value).__name__}")


class Scalar:
    """An element ``re + im*i`` of Q(i) with arbitrary-precision parts.

    Values are immutable; both parts are stored as reduced ``Fraction``s.
    Floats are rejected on purpose.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def of(cls, value) -> "Scalar":
        """Coerce ints, Fractions and Scalars."""
        if isinstance(value, Scalar):
            return value
        return cls._raw(_frac(value), _ZERO)

    # -- predicates -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.of(other)
            except TypeError:
                return NotImplemented
        return Scalar._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.of(other)
            except TypeError:
                return NotImplemented
        return Scalar._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.of(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._raw(a * c, _ZERO)
        return Scalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("inverse of zero Scalar")
        if not self.im:
            return Scalar._raw(1 / self.re, _ZERO)
        n = self.norm()
        return Scalar._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.of(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.of(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if not self.im:
            return Scalar._raw(self.re**k, _ZERO)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.re.numerator, self.re.denominator, self.im.numerator, self.im.denominator)

    # -- conversion -------------------------------------------------------

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict[str, str]:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        if isinstance(obj, dict):
            return cls(obj.get("re", "0"), obj.get("im", "0"))
        if isinstance(obj, (int, str)):
            return cls(obj)
        raise ValueError(f"bad scalar JSON: {obj!r}")

    def is_negative_like(self) -> bool:
        """True when the printed form naturally starts with a minus sign."""
        return (not self.im and self.re < 0) or (not self.re and self.im < 0)

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return str(re)
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = f"{im}i"
        if not re:
            return ims
        if ims.startswith("-"):
            return f"{re}{ims}"
        return f"{re}+{ims}"

    def __repr__(self):
        return f"Scalar({self})"


ZERO = Scalar._raw(_ZERO, _ZERO)
ONE = Scalar._raw(_ONE, _ZERO)
I = Scalar._raw(_ZERO, _ONE)
