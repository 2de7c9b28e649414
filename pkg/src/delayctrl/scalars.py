"""Scalar types: complex numbers with exact rational parts, and parsing.

Exact mode stores every matrix entry as a :class:`QC`, a complex number
whose real and imaginary parts are :class:`fractions.Fraction`.  Numeric
mode uses plain ``complex`` inside ``complex128`` numpy arrays.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import RationalParseError

EXACT = "exact"
NUMERIC = "numeric"


class QC:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, QC):
            return other
        if isinstance(other, (int, Fraction)):
            return QC(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QC(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QC(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QC(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QC(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero QC")
        return QC((self.re * o.re + self.im * o.im) / den,
                  (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return QC(self.re, -self.im)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QC({self.re})"
        return f"QC({self.re}, {self.im})"


def parse_rational(text) -> Fraction:
    """Parse an int, Fraction, or string like '3', '-1/2', '0.25'."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise RationalParseError(f"cannot parse {text!r} as a rational") from exc
    raise RationalParseError(f"cannot parse {text!r} as a rational")


def parse_scalar(value, mode: str):
    """Parse one matrix entry for the given scalar mode.

    Accepted inputs: int, rational string ('p/q' or decimal), a two-element
    list ``[re, im]`` of such, and (numeric mode only) float.
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise RationalParseError(f"complex entry must be [re, im], got {value!r}")
        re, im = value
        if mode == EXACT:
            return QC(parse_rational(re), parse_rational(im))
        return complex(_parse_real(re), _parse_real(im))
    if mode == EXACT:
        if isinstance(value, float):
            raise RationalParseError(
                f"float entry {value!r} not allowed in exact mode; use a string")
        return QC(parse_rational(value))
    return complex(_parse_real(value))


def _parse_real(value) -> float:
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        return float(parse_rational(value))
    raise RationalParseError(f"cannot parse {value!r} as a number")


def matrix_from_data(rows, mode: str) -> np.ndarray:
    """Build a matrix from nested lists of raw entries."""
    if mode == EXACT:
        data = [[parse_scalar(x, EXACT) for x in row] for row in rows]
        return np.array(data, dtype=object)
    data = [[parse_scalar(x, NUMERIC) for x in row] for row in rows]
    return np.array(data, dtype=complex)


def scalar_to_json(value):
    """Serialize one entry back to the JSON system-file representation."""
    if isinstance(value, QC):
        if value.im == 0:
            return str(value.re)
        return [str(value.re), str(value.im)]
    z = complex(value)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]
