"""Exact Gaussian-rational arithmetic.

Every coefficient in the symbolic layer is a complex number with rational
real and imaginary parts, kept exact so that operator identities either
hold on the nose or fail with a nonzero residual.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

_SCALARS = (int, Fraction)


class GaussianRational:
    """A complex number ``a + b*i`` with exact rational parts ``a`` and ``b``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- constructors -------------------------------------------------

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, _SCALARS):
            return cls(value)
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    # -- predicates ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return GaussianRational(self.re * other, self.im * other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        denom = other.re * other.re + other.im * other.im
        if not denom:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / denom,
            (self.im * other.re - self.re * other.im) / denom,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, _SCALARS):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    # -- conversions ----------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_text(self) -> str:
        """Render as ``a/b+c/d*i`` (pure parts abbreviated, e.g. ``-1/2*i``)."""
        if not self:
            return "0"
        parts = []
        if self.re:
            parts.append(_frac_text(self.re))
        if self.im:
            imag = f"{_frac_text(self.im)}*i"
            if parts and not imag.startswith("-"):
                parts.append("+" + imag)
            else:
                parts.append(imag)
        return "".join(parts)

    _TOKEN = _re.compile(r"([+-]?\d+(?:/\d+)?)(\*i)?")

    @classmethod
    def from_text(cls, text: str) -> "GaussianRational":
        text = text.strip()
        if text == "0":
            return cls()
        re_part = Fraction(0)
        im_part = Fraction(0)
        pos = 0
        while pos < len(text):
            match = cls._TOKEN.match(text, pos)
            if match is None:
                raise ValueError(f"bad coefficient text: {text!r}")
            value = Fraction(match.group(1))
            if match.group(2):
                im_part += value
            else:
                re_part += value
            pos = match.end()
        return cls(re_part, im_part)

    def __repr__(self) -> str:
        return self.to_text()


def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


ZERO = GaussianRational()
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
HALF = GaussianRational(Fraction(1, 2))
