"""Exact scalars: rationals and Gaussian rationals.

Every quantity that feeds a pass/fail decision in this package is either a
`fractions.Fraction` or a `GaussianRational` (a pair of Fractions).  Norms
and moduli are carried around *squared* so that comparisons stay inside the
rationals; nothing here ever takes a square root.

Text form used by the JSON interchange formats:

    "p/q"          real rational (also plain "p", and "-p/q")
    "p/q+r/s i"    Gaussian rational (also "p/q-r/s i"; spaces optional
                   around the sign, one space before the trailing "i")
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class ScalarFormatError(ValueError):
    """Raised when a rational or Gaussian-rational string does not parse."""


_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_GAUSSIAN_RE = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)\s*(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)\s*i$"
)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" (or "p") into a Fraction.

    Raises ScalarFormatError on anything else, including embedded spaces.
    """
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ScalarFormatError(f"not a rational literal: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise ScalarFormatError(f"zero denominator: {text!r}") from None


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """An element of Q[i], stored as exact real and imaginary Fractions."""

    re: Fraction
    im: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(value: "Scalar | int") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value), Fraction(0))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        """Squared modulus |z|^2 = re^2 + im^2, exact in Q."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other: "Scalar | int") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: "Scalar | int") -> "GaussianRational":
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other: "Scalar | int") -> "GaussianRational":
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other: "Scalar | int") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __str__(self) -> str:
        return format_scalar(self)


Scalar = Union[Fraction, GaussianRational]


def parse_scalar(text: str) -> Scalar:
    """Parse either scalar text form; real literals come back as Fraction."""
    stripped = text.strip() if isinstance(text, str) else ""
    match = _GAUSSIAN_RE.match(stripped)
    if match:
        real = Fraction(match.group("re"))
        imag = Fraction(match.group("im"))
        if match.group("sign") == "-":
            imag = -imag
        return GaussianRational(real, imag)
    return parse_rational(text)


def format_scalar(value: Scalar | int) -> str:
    """Render a scalar in the interchange text form (real parts stay "p/q")."""
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return format_rational(value.re)
        sign = "+" if value.im >= 0 else "-"
        return f"{format_rational(value.re)}{sign}{format_rational(abs(value.im))} i"
    return format_rational(Fraction(value))


def scalar_re(value: Scalar | int) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.re
    return Fraction(value)


def scalar_im(value: Scalar | int) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.im
    return Fraction(0)


def abs_sq(value: Scalar | int) -> Fraction:
    """Squared modulus, valid for both scalar kinds."""
    if isinstance(value, GaussianRational):
        return value.abs_sq()
    frac = Fraction(value)
    return frac * frac


def as_real(value: Scalar | int) -> Fraction:
    """Downcast to Fraction; rejects scalars with a nonzero imaginary part."""
    if isinstance(value, GaussianRational):
        if value.im != 0:
            raise ScalarFormatError(f"scalar {value} is not real")
        return value.re
    return Fraction(value)
