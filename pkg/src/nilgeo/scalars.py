"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals.

The text grammar used for every coefficient on disk is::

    scalar := rat ( ("+" | "-") rat "i" )?  |  rat "i"
    rat    := "-"? digits ( "/" digits )?

so ``"3/2-1/3i"``, ``"-7"``, ``"1/2i"`` and ``"0"`` are all valid.  There is
no bare ``"i"`` shorthand and no ``"j"`` suffix.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from nilgeo.errors import ScalarParseError

__all__ = [
    "GaussianRational",
    "Scalar",
    "I_UNIT",
    "as_gaussian",
    "as_rational",
    "conj",
    "emit_scalar",
    "is_real",
    "parse_scalar",
]


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("im", "re")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    def __repr__(self) -> str:
        return f"GaussianRational({emit_scalar(self)!r})"

    def __str__(self) -> str:
        return emit_scalar(self)

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __add__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other) -> "GaussianRational":
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b:
                return GaussianRational._raw(a * c, a * d)
            if not d:
                return GaussianRational._raw(a * c, b * c)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``re**2 + im**2``."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational._raw(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other) -> "GaussianRational":
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)


Scalar = Union[Fraction, GaussianRational]

I_UNIT = GaussianRational(0, 1)


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x, 0)


def as_rational(x) -> Fraction:
    """Return ``x`` as a Fraction; raise ValueError if it has an imaginary part."""
    if isinstance(x, GaussianRational):
        if x.im:
            raise ValueError(f"expected a real scalar, got {emit_scalar(x)}")
        return x.re
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def conj(x):
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def is_real(x) -> bool:
    return not isinstance(x, GaussianRational) or not x.im


_RAT = r"-?\d+(?:/\d+)?"
_FULL = re.compile(rf"^(?P<re>{_RAT})(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)i)?$")
_PURE_IM = re.compile(rf"^(?P<im>{_RAT})i$")
_TOKEN = re.compile(r"[+-]?[^+-]+")


def _rat(text: str, source: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError(f"zero denominator in token {text!r} of {source!r}", token=text)
    return Fraction(int(num), int(den) if den else 1)


def _offending_token(text: str) -> str:
    for tok in _TOKEN.findall(text):
        body = tok.lstrip("+-")
        if body.endswith("i"):
            body = body[:-1]
        if not re.fullmatch(r"\d+(?:/\d+)?", body):
            return tok
    return text


def parse_scalar(text: str) -> GaussianRational:
    """Parse scalar text into an exact Gaussian rational.

    >>> parse_scalar("3/2-1/3i")
    GaussianRational('3/2-1/3i')
    >>> parse_scalar("2/4")
    GaussianRational('1/2')
    """
    if not isinstance(text, str):
        raise ScalarParseError(f"scalar must be a string, got {type(text).__name__}", token=repr(text))
    s = text
    m = _FULL.fullmatch(s)
    if m:
        re_part = _rat(m["re"], text)
        im_part = Fraction(0)
        if m["im"] is not None:
            im_part = _rat(m["im"], text)
            if m["sign"] == "-":
                im_part = -im_part
        return GaussianRational(re_part, im_part)
    m = _PURE_IM.fullmatch(s)
    if m:
        return GaussianRational(0, _rat(m["im"], text))
    tok = _offending_token(s) if s else "''"
    raise ScalarParseError(f"malformed scalar {text!r} (offending token {tok!r})", token=tok)


def _emit_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def emit_scalar(x) -> str:
    """Canonical text: real part first, imaginary part only when nonzero."""
    if isinstance(x, GaussianRational):
        re_part, im_part = x.re, x.im
    else:
        re_part, im_part = Fraction(x), Fraction(0)
    if not im_part:
        return _emit_rat(re_part)
    if not re_part:
        return _emit_rat(im_part) + "i"
    sign = "-" if im_part < 0 else "+"
    return f"{_emit_rat(re_part)}{sign}{_emit_rat(abs(im_part))}i"
