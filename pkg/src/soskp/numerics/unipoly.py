"""Dense univariate polynomials over exact rationals or HPFloat.

Coefficients are stored densely, index i = coefficient of x^i, with no
trailing zeros (the zero polynomial has an empty coefficient tuple and
degree -1).  A polynomial is either rational-coefficient (exact
``fractions.Fraction`` arithmetic) or hpfloat-coefficient (MPFR at the
polynomial's uniform precision).  Mixing kinds raises
``KindMismatchError``; conversion is always explicit.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

from ..errors import KindMismatchError
from .hpfloat import HPFloat, context_for

RATIONAL = "rational"
HPF = "hpfloat"


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class UniPoly:
    """Dense univariate polynomial; immutable."""

    __slots__ = ("coeffs", "kind", "prec")

    def __init__(self, coeffs, kind: str | None = None, prec: int | None = None):
        coeffs = list(coeffs)
        if kind is None:
            kind = HPF if any(isinstance(c, (HPFloat,)) or type(c).__name__ == "mpfr" for c in coeffs) else RATIONAL
        if kind == RATIONAL:
            vals = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
            self.prec = None
        elif kind == HPF:
            if prec is None:
                precs = [c.prec for c in coeffs if isinstance(c, HPFloat)]
                prec = min(precs) if precs else None
                if prec is None:
                    raise ValueError("hpfloat polynomial needs a precision")
            vals = []
            for c in coeffs:
                if isinstance(c, HPFloat):
                    vals.append(gmpy2.mpfr(c._v, prec))
                elif type(c).__name__ == "mpfr":
                    vals.append(gmpy2.mpfr(c, prec))
                elif isinstance(c, Fraction):
                    vals.append(gmpy2.mpfr(gmpy2.mpq(c.numerator, c.denominator), prec))
                else:
                    vals.append(gmpy2.mpfr(c, prec))
            self.prec = prec
        else:
            raise ValueError(f"unknown coefficient kind {kind!r}")
        self.kind = kind
        self.coeffs = _trim(vals)

    # -- constructors --------------------------------------------------------

    @classmethod
    def _raw(cls, coeffs: tuple, kind: str, prec: int | None) -> "UniPoly":
        out = object.__new__(cls)
        out.coeffs = coeffs
        out.kind = kind
        out.prec = prec
        return out

    @classmethod
    def zero(cls, kind: str = RATIONAL, prec: int | None = None) -> "UniPoly":
        return cls._raw((), kind, prec if kind == HPF else None)

    @classmethod
    def const(cls, c, kind: str = RATIONAL, prec: int | None = None) -> "UniPoly":
        return cls([c], kind=kind, prec=prec)

    @classmethod
    def x(cls, kind: str = RATIONAL, prec: int | None = None) -> "UniPoly":
        return cls([0, 1], kind=kind, prec=prec)

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int):
        if i < 0 or i >= len(self.coeffs):
            return Fraction(0) if self.kind == RATIONAL else HPFloat(0, self.prec)
        c = self.coeffs[i]
        return c if self.kind == RATIONAL else HPFloat._raw(c, self.prec)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.kind, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            xs = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"{c}{'*' if xs else ''}{xs}")
        body = " + ".join(terms[:6]) + (" + ..." if len(terms) > 6 else "")
        return f"UniPoly({body}; kind={self.kind})"

    # -- kind handling ---------------------------------------------------------

    def _check_kind(self, other: "UniPoly"):
        if self.kind != other.kind:
            raise KindMismatchError(
                f"cannot combine {self.kind} and {other.kind} polynomials; convert explicitly"
            )

    def _op_prec(self, other: "UniPoly") -> int | None:
        if self.kind == RATIONAL:
            return None
        return min(self.prec, other.prec)

    def to_hpfloat(self, prec: int) -> "UniPoly":
        if self.kind == HPF:
            return UniPoly._raw(
                tuple(gmpy2.mpfr(c, prec) for c in self.coeffs), HPF, prec
            )
        vals = tuple(
            gmpy2.mpfr(gmpy2.mpq(c.numerator, c.denominator), prec) for c in self.coeffs
        )
        return UniPoly._raw(_trim(list(vals)), HPF, prec)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            return NotImplemented
        self._check_kind(other)
        prec = self._op_prec(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        if self.kind == RATIONAL:
            out = list(a)
            for i, c in enumerate(b):
                out[i] = out[i] + c
        else:
            ctx = context_for(prec)
            out = [gmpy2.mpfr(c, prec) for c in a]
            for i, c in enumerate(b):
                out[i] = ctx.add(out[i], c)
        return UniPoly._raw(_trim(out), self.kind, prec)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "UniPoly":
        if self.kind == RATIONAL:
            return UniPoly._raw(tuple(-c for c in self.coeffs), self.kind, None)
        neg = context_for(self.prec).minus
        return UniPoly._raw(tuple(neg(c) for c in self.coeffs), self.kind, self.prec)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            return NotImplemented
        self._check_kind(other)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.kind, self._op_prec(other))
        prec = self._op_prec(other)
        a, b = self.coeffs, other.coeffs
        if self.kind == RATIONAL:
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if not ai:
                    continue
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        else:
            ctx = context_for(prec)
            fma = ctx.fma
            zero = gmpy2.mpfr(0, prec)
            out = [zero] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                base = i
                for j, bj in enumerate(b):
                    k = base + j
                    out[k] = fma(ai, bj, out[k])
        return UniPoly._raw(_trim(out), self.kind, prec)

    def scale(self, c) -> "UniPoly":
        """Multiply by a scalar (int/Fraction for either kind, HPFloat for hpfloat)."""
        if self.kind == RATIONAL:
            if isinstance(c, HPFloat):
                raise KindMismatchError("cannot scale a rational polynomial by HPFloat")
            f = Fraction(c)
            return UniPoly._raw(_trim([x * f for x in self.coeffs]), RATIONAL, None)
        prec = self.prec if not isinstance(c, HPFloat) else min(self.prec, c.prec)
        ctx = context_for(prec)
        if isinstance(c, HPFloat):
            cv = c._v
        elif isinstance(c, Fraction):
            cv = gmpy2.mpq(c.numerator, c.denominator)
        else:
            cv = c
        return UniPoly._raw(
            _trim([ctx.mul(gmpy2.mpfr(x, prec), cv) for x in self.coeffs]), HPF, prec
        )

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = UniPoly.const(1, self.kind, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    def derivative(self) -> "UniPoly":
        if self.degree <= 0:
            return UniPoly.zero(self.kind, self.prec)
        if self.kind == RATIONAL:
            out = [self.coeffs[i] * i for i in range(1, len(self.coeffs))]
        else:
            ctx = context_for(self.prec)
            out = [ctx.mul(self.coeffs[i], i) for i in range(1, len(self.coeffs))]
        return UniPoly._raw(_trim(out), self.kind, self.prec)

    def compose_affine(self, alpha, beta) -> "UniPoly":
        """p(alpha*x + beta), Horner-style composition."""
        if self.is_zero():
            return self
        if self.kind == RATIONAL:
            if isinstance(alpha, HPFloat) or isinstance(beta, HPFloat):
                raise KindMismatchError("affine composition of rational poly needs rational (alpha, beta)")
            alpha, beta = Fraction(alpha), Fraction(beta)
            result = [self.coeffs[-1]]
            for i in range(len(self.coeffs) - 2, -1, -1):
                nxt = [Fraction(0)] * (len(result) + 1)
                for j, c in enumerate(result):
                    nxt[j + 1] += c * alpha
                    nxt[j] += c * beta
                nxt[0] += self.coeffs[i]
                result = nxt
            return UniPoly._raw(_trim(result), RATIONAL, None)
        prec = self.prec
        if isinstance(alpha, HPFloat):
            prec = min(prec, alpha.prec)
        if isinstance(beta, HPFloat):
            prec = min(prec, beta.prec)
        ctx = context_for(prec)
        av = alpha._v if isinstance(alpha, HPFloat) else _scalar_mp(alpha)
        bv = beta._v if isinstance(beta, HPFloat) else _scalar_mp(beta)
        zero = gmpy2.mpfr(0, prec)
        result = [gmpy2.mpfr(self.coeffs[-1], prec)]
        for i in range(len(self.coeffs) - 2, -1, -1):
            nxt = [zero] * (len(result) + 1)
            for j, c in enumerate(result):
                nxt[j + 1] = ctx.fma(c, av, nxt[j + 1])
                nxt[j] = ctx.fma(c, bv, nxt[j])
            nxt[0] = ctx.add(nxt[0], self.coeffs[i])
            result = nxt
        return UniPoly._raw(_trim(result), HPF, prec)

    # -- evaluation --------------------------------------------------------------

    def __call__(self, x):
        """Horner evaluation.  Rational poly at Fraction/int is exact."""
        if self.kind == RATIONAL:
            if isinstance(x, HPFloat):
                return self.to_hpfloat(x.prec)(x)
            xv = Fraction(x)
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * xv + c
            return acc
        prec = self.prec
        if isinstance(x, HPFloat):
            prec = min(prec, x.prec)
            xv = x._v
        else:
            xv = _scalar_mp(x)
        ctx = context_for(prec)
        acc = gmpy2.mpfr(0, prec)
        for c in reversed(self.coeffs):
            acc = ctx.fma(acc, xv, c)
        return HPFloat._raw(acc, prec)

    def abs_coeff_bound_at(self, x) -> HPFloat:
        """sum_j |c_j| |x|^j, the Horner conditioning scale at x."""
        p = self.to_hpfloat(self.prec or 64) if self.kind == RATIONAL else self
        prec = p.prec
        ctx = context_for(prec)
        xv = ctx.abs(x._v if isinstance(x, HPFloat) else gmpy2.mpfr(_scalar_mp(x), prec))
        acc = gmpy2.mpfr(0, prec)
        for c in reversed(p.coeffs):
            acc = ctx.fma(acc, xv, ctx.abs(c))
        return HPFloat._raw(acc, prec)


def _scalar_mp(x):
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    return x
