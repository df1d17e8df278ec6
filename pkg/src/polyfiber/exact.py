"""Exact arithmetic on the Gaussian rationals Q(i).

Values are immutable and always stored in canonical form (both parts are
reduced fractions with positive denominators, which :class:`fractions.Fraction`
guarantees), so structural equality is mathematical equality and zero tests
are exact.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import mpmath
from mpmath.libmp import from_rational, round_nearest

from polyfiber.errors import ParseError

__all__ = [
    "GaussianRational",
    "gr",
    "gr_parse",
    "gr_format",
    "gr_invert",
    "gr_to_float",
    "exact_determinant",
]

_INT = r"[+-]?\d+"
_RAT = rf"{_INT}(?:/\d+)?"
_FULL = re.compile(rf"^(?P<re>{_RAT})(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)i)?$")
_TOKEN = re.compile(r"[+-]?\d+(?:/\d+)?i?|.")


class GaussianRational:
    """A complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value, 0)
        if isinstance(value, str):
            return gr_parse(value)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * gr_invert(o)

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * gr_invert(self)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return gr_invert(self) ** (-n)
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    # -- conversions ------------------------------------------------------
    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return gr_format(self)

    def __repr__(self):
        return f"GaussianRational('{gr_format(self)}')"


Scalar = Union[GaussianRational, int, Fraction, str]


def gr(value: Scalar) -> GaussianRational:
    """Shorthand constructor accepting ints, fractions and grammar strings."""
    return GaussianRational.coerce(value)


def _bad_token(text: str) -> str:
    """Locate the first token that breaks the grammar, for error messages."""
    tokens = _TOKEN.findall(text)
    for tok in tokens:
        if not re.fullmatch(rf"{_RAT}i?|[+-]", tok):
            return tok
    if "/0" in text.replace(" ", ""):
        return text
    return tokens[-1] if tokens else text


def gr_parse(text: str) -> GaussianRational:
    """Parse ``<rat>`` or ``<rat>(+|-)<rat>i`` with ``<rat> = int | int/int``.

    >>> gr_parse("1/2-3/4i")
    GaussianRational('1/2-3/4i')
    >>> gr_parse("2/4")
    GaussianRational('1/2')
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip()
    match = _FULL.match(s)
    if match is None:
        raise ParseError(f"malformed Gaussian rational {text!r}: offending token {_bad_token(s)!r}")
    try:
        re_part = Fraction(match["re"])
        im_part = Fraction(match["im"]) if match["im"] is not None else Fraction(0)
    except ZeroDivisionError:
        bad = next(
            (p for p in (match["re"], match["im"]) if p and re.search(r"/0+$", p)), s
        )
        raise ParseError(f"zero denominator in {text!r}: offending token {bad!r}") from None
    if match["sign"] == "-":
        im_part = -im_part
    return GaussianRational(re_part, im_part)


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def gr_format(z: GaussianRational) -> str:
    """Canonical text form; ``gr_parse(gr_format(z)) == z``."""
    if not z.im:
        return _format_rational(z.re)
    sign = "-" if z.im < 0 else "+"
    return f"{_format_rational(z.re)}{sign}{_format_rational(abs(z.im))}i"


def gr_invert(z: GaussianRational) -> GaussianRational:
    z = GaussianRational.coerce(z)
    n = z.norm()
    if not n:
        raise ZeroDivisionError("inverse of the zero Gaussian rational")
    return GaussianRational(z.re / n, -z.im / n)


def _round_rational(q: Fraction, precision: int):
    return mpmath.mpf(from_rational(q.numerator, q.denominator, precision, round_nearest))


def gr_to_float(z: GaussianRational, precision: int = 53):
    """Correctly rounded floating approximation.

    At 53 bits this is a Python ``complex`` (``Fraction.__float__`` rounds to
    nearest); above that an :class:`mpmath.mpc` carrying ``precision`` bits.
    """
    if precision < 53:
        raise ValueError("precision must be at least 53 bits")
    z = GaussianRational.coerce(z)
    if precision == 53:
        return complex(float(z.re), float(z.im))
    with mpmath.workprec(precision):
        return mpmath.mpc(_round_rational(z.re, precision), _round_rational(z.im, precision))


def exact_determinant(rows: Sequence[Sequence[Scalar]]) -> GaussianRational:
    """Determinant by Gaussian elimination over Q(i); no rounding anywhere."""
    a = [[gr(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    det = GaussianRational(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return GaussianRational(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = gr_invert(p)
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def gr_sum(values: Iterable[Scalar]) -> GaussianRational:
    total_re = Fraction(0)
    total_im = Fraction(0)
    for v in values:
        v = gr(v)
        total_re += v.re
        total_im += v.im
    return GaussianRational(total_re, total_im)
