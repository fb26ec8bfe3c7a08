"""Chebyshev polynomials of the first kind and their extremal-root facts."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .hpfloat import HPFloat, pi
from .unipoly import RATIONAL, UniPoly


@lru_cache(maxsize=None)
def _cheb_coeffs(d: int) -> tuple:
    if d == 0:
        return (Fraction(1),)
    if d == 1:
        return (Fraction(0), Fraction(1))
    prev2, prev1 = _cheb_coeffs(d - 2), _cheb_coeffs(d - 1)
    out = [Fraction(0)] * (d + 1)
    for i, c in enumerate(prev1):
        out[i + 1] += 2 * c
    for i, c in enumerate(prev2):
        out[i] -= c
    return tuple(out)


def cheb_T(d: int) -> UniPoly:
    """T_d with exact integer coefficients via T_{d+1} = 2x T_d - T_{d-1}."""
    if d < 0:
        raise ValueError("Chebyshev degree must be nonnegative")
    return UniPoly._raw(_cheb_coeffs(d), RATIONAL, None)


def cheb_eval(d: int, x: HPFloat) -> HPFloat:
    """T_d(x) by the trigonometric/hyperbolic closed form.

    Well conditioned for any real x, unlike Horner on the power-basis
    coefficients, whose error grows like the 2^{O(d)} coefficient sum.
    """
    if d == 0:
        return HPFloat(1, x.prec)
    work = x.prec + 32 + d.bit_length()
    xv = x.with_precision(work)
    if xv >= -1 and xv <= 1:
        out = (xv.acos() * d).cos()
    elif xv > 1:
        out = (xv.acosh() * d).cosh()
    else:
        out = ((-xv).acosh() * d).cosh()
        if d % 2:
            out = -out
    return out.with_precision(x.prec)


def smallest_root_shifted_cheb(d: int, N: int, prec: int) -> HPFloat:
    """Smallest root r0 of T_d(x/N - 1), i.e. r0 = N(1 - cos(pi/(2d))).

    The roots of T_d are cos((2j+1)pi/(2d)); mapping through x = N(1+u)
    the smallest is at u = -cos(pi/(2d)).  Satisfies r0 <= pi^2 N / (8 d^2).
    """
    if d < 1 or N < 1:
        raise ValueError("d and N must be positive")
    work = prec + 32
    theta = pi(work) / (2 * d)
    r0 = (HPFloat(1, work) - theta.cos()) * N
    return r0.with_precision(prec)


def cheb_root0_upper_bound(d: int, N: int, prec: int) -> HPFloat:
    """pi^2 N / (8 d^2), the closed-form cap on the smallest shifted root."""
    p = pi(prec + 32)
    return (p * p * N / (8 * d * d)).with_precision(prec)


def cheb_growth_lower_bound(d: int, N: int, c: HPFloat) -> tuple[HPFloat, HPFloat]:
    """Return (T_d(-c/N - 1)^2, (1/4)(1 + sqrt(2c/N))^(2d)) for c in [0, N].

    The first dominates the second: extremal growth of T_d just outside
    [-1, 1].
    """
    work = c.prec + 32 + d.bit_length()
    cv = c.with_precision(work)
    t = cheb_eval(d, -(cv / N) - 1)
    lhs = t * t
    rhs = (HPFloat(1, work) + (cv * 2 / N).sqrt()) ** (2 * d) / 4
    return lhs.with_precision(c.prec), rhs.with_precision(c.prec)
