"""Arbitrary-precision binary floats with explicit, carried precision.

Backed by MPFR through gmpy2.  Every value knows its own precision in
bits; binary operations round correctly at the minimum of the operand
precisions, so precision never silently inflates.  All operations go
through per-precision gmpy2 context objects (never the thread-global
context), which keeps everything pure and thread-safe.
"""

from __future__ import annotations

import os
from fractions import Fraction

import gmpy2

MIN_PRECISION = 64
DEFAULT_PRECISION = 256

_ENV_PRECISION = "SOSKP_PRECISION_BITS"


def default_precision() -> int:
    """Library default precision, overridable via SOSKP_PRECISION_BITS."""
    raw = os.environ.get(_ENV_PRECISION)
    if raw:
        try:
            return max(MIN_PRECISION, int(raw))
        except ValueError:
            pass
    return DEFAULT_PRECISION


_CTX_CACHE: dict[int, "gmpy2.context"] = {}


def context_for(prec: int) -> "gmpy2.context":
    ctx = _CTX_CACHE.get(prec)
    if ctx is None:
        ctx = gmpy2.context(precision=prec)
        _CTX_CACHE[prec] = ctx
    return ctx


def _to_mpfr(value, prec: int):
    if isinstance(value, HPFloat):
        return gmpy2.mpfr(value._v, prec)
    if isinstance(value, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(value.numerator, value.denominator), prec)
    return gmpy2.mpfr(value, prec)


class HPFloat:
    """A binary float with value and precision (>= 64 bits)."""

    __slots__ = ("_v", "prec")

    def __init__(self, value=0, prec: int | None = None):
        if prec is None:
            prec = value.prec if isinstance(value, HPFloat) else default_precision()
        if prec < MIN_PRECISION:
            raise ValueError(f"precision {prec} below minimum {MIN_PRECISION}")
        self.prec = prec
        self._v = _to_mpfr(value, prec)

    @classmethod
    def _raw(cls, mpfr_value, prec: int) -> "HPFloat":
        out = object.__new__(cls)
        out._v = mpfr_value
        out.prec = prec
        return out

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        """Return (mpfr other, result precision) or NotImplemented."""
        if isinstance(other, HPFloat):
            return other._v, min(self.prec, other.prec)
        if isinstance(other, (int, Fraction)):
            # exact operands do not limit precision
            return _to_mpfr(other, self.prec), self.prec
        if isinstance(other, float):
            return gmpy2.mpfr(other, self.prec), self.prec
        return None, None

    def __add__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).add(self._v, o), p)

    __radd__ = __add__

    def __sub__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).sub(self._v, o), p)

    def __rsub__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).sub(o, self._v), p)

    def __mul__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).mul(self._v, o), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).div(self._v, o), p)

    def __rtruediv__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).div(o, self._v), p)

    def __pow__(self, other):
        o, p = self._coerce(other)
        if o is None:
            return NotImplemented
        return HPFloat._raw(context_for(p).pow(self._v, o), p)

    def __neg__(self):
        # bare -x would round through the thread-global context
        return HPFloat._raw(context_for(self.prec).minus(self._v), self.prec)

    def __abs__(self):
        return HPFloat._raw(context_for(self.prec).abs(self._v), self.prec)

    # -- comparisons (on values, precision ignored) -------------------------

    def _cmp_value(self, other):
        if isinstance(other, HPFloat):
            return other._v
        if isinstance(other, Fraction):
            return gmpy2.mpq(other.numerator, other.denominator)
        if isinstance(other, (int, float)):
            return other
        return None

    def __eq__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is None else self._v == o

    def __lt__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is None else self._v < o

    def __le__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is None else self._v <= o

    def __gt__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is None else self._v > o

    def __ge__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is None else self._v >= o

    def __hash__(self):
        return hash(self._v)

    def __bool__(self):
        return bool(self._v)

    # -- functions -----------------------------------------------------------

    def sqrt(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).sqrt(self._v), self.prec)

    def exp(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).exp(self._v), self.prec)

    def log(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).log(self._v), self.prec)

    def log2(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).log2(self._v), self.prec)

    def cos(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).cos(self._v), self.prec)

    def acos(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).acos(self._v), self.prec)

    def cosh(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).cosh(self._v), self.prec)

    def acosh(self) -> "HPFloat":
        return HPFloat._raw(context_for(self.prec).acosh(self._v), self.prec)

    # -- conversions ---------------------------------------------------------

    def with_precision(self, prec: int) -> "HPFloat":
        return HPFloat(self, prec)

    def __float__(self):
        return float(self._v)

    def __int__(self):
        return int(self._v)

    def as_fraction(self) -> Fraction:
        """Exact rational value of this binary float."""
        num, den = self._v.as_integer_ratio()
        return Fraction(int(num), int(den))

    def is_finite(self) -> bool:
        return gmpy2.is_finite(self._v)

    def to_decimal_string(self) -> str:
        """Decimal string with enough digits to round-trip bit-exactly."""
        return mpfr_to_decimal(self._v, self.prec)

    @classmethod
    def from_decimal_string(cls, s: str, prec: int) -> "HPFloat":
        return cls._raw(gmpy2.mpfr(s, prec), prec)

    def __repr__(self):
        return f"HPFloat({str(self._v)}, prec={self.prec})"

    def __str__(self):
        return str(self._v)


def pi(prec: int) -> HPFloat:
    return HPFloat._raw(gmpy2.const_pi(precision=prec), prec)


def decimal_digits_for(prec: int) -> int:
    # ceil(prec * log10(2)) + 2 guarantees a bit-exact decimal round trip
    return int(prec * 0.30103) + 3


def mpfr_to_decimal(v, prec: int) -> str:
    if not gmpy2.is_finite(v):
        raise ValueError(f"cannot serialize non-finite value {v}")
    if v == 0:
        return "0"
    mant, exp, _ = gmpy2.digits(v, 10, decimal_digits_for(prec))
    sign = "-" if mant.startswith("-") else ""
    digits = mant.lstrip("-")
    return f"{sign}0.{digits}e{exp}"
