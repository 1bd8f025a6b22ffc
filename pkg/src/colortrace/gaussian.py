"""Exact Gaussian rationals: numbers a + b*i with arbitrary-precision
rational parts.

Every symbolic coefficient in the decomposition is of this form (the
imaginary unit enters through the commutation relation), so this is the
coefficient field of the whole package.  ``fractions.Fraction`` keeps
parts in lowest terms automatically.
"""

from __future__ import annotations

from fractions import Fraction

_RATIONAL = (int, Fraction)


def _raw(re: Fraction, im: Fraction) -> "GaussianRational":
    """Internal constructor for parts that are already Fractions."""
    g = GaussianRational.__new__(GaussianRational)
    g.re = re
    g.im = im
    return g


class GaussianRational:
    """Immutable exact complex rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = as_gaussian(other)
        return _raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return _raw(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-as_gaussian(other))

    def __rsub__(self, other):
        return as_gaussian(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, _RATIONAL):
            return _raw(self.re * other, self.im * other)
        other = as_gaussian(other)
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not b:
            return _raw(a * c, a * d)
        if not d:
            return _raw(a * c, b * c)
        return _raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL):
            return _raw(self.re / other, self.im / other)
        other = as_gaussian(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return self * _raw(other.re / norm, -other.im / norm)

    def mul_i(self) -> "GaussianRational":
        """Multiply by the imaginary unit (cheap rotation)."""
        return _raw(-self.im, self.re)

    def conjugate(self) -> "GaussianRational":
        return _raw(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, _RATIONAL):
            return self.im == 0 and self.re == other
        return (
            isinstance(other, GaussianRational)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def as_gaussian(value) -> GaussianRational:
    """Coerce an int, Fraction or GaussianRational."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, _RATIONAL):
        return GaussianRational(value)
    raise TypeError(f"cannot interpret {value!r} as a GaussianRational")


def i_power(k: int) -> GaussianRational:
    """The power i**k as an exact value."""
    return (ONE, I, -ONE, -I)[k % 4]
