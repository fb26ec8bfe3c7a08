"""Exact identity behind the consecutive-roots SOS building block.

For k >= 1 and r in (k-1, k], the polynomial (t - r) * prod_{j<k} (t - j)
equals (k - r) * k! * C(t, k) + (k+1)! * C(t, k+1), where C(t, j) is the
falling-factorial binomial.  The right side is a positive combination of
elementary symmetric polynomials in squared 0/1 variables once t is read
as a Hamming weight, which is what makes it an SOS building block of
degree 2k + 2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from ..errors import SoskpError
from ..numerics import RATIONAL, UniPoly


@lru_cache(maxsize=None)
def falling_factorial_poly(k: int) -> UniPoly:
    """prod_{j=0}^{k-1} (t - j) with exact integer coefficients."""
    poly = UniPoly.const(1, RATIONAL)
    for j in range(k):
        poly = poly * UniPoly([Fraction(-j), Fraction(1)])
    return poly


def binomial_poly(j: int) -> UniPoly:
    """C(t, j) = falling factorial / j!."""
    return falling_factorial_poly(j).scale(Fraction(1, factorial(j)))


def akr_polynomial(k: int, r: Fraction) -> tuple[UniPoly, UniPoly, bool]:
    """Return (lhs, rhs, equal) for the consecutive-roots identity at (k, r).

    lhs = (t - r) prod_{j=0}^{k-1} (t - j)
    rhs = (k - r) k! C(t, k) + (k+1)! C(t, k+1)

    ``equal`` is exact rational coefficient equality and must always hold.
    """
    if k < 1:
        raise SoskpError("k must be >= 1")
    r = Fraction(r)
    if not (k - 1 < r <= k):
        raise SoskpError(f"r={r} outside (k-1, k] for k={k}")
    lhs = UniPoly([-r, Fraction(1)]) * falling_factorial_poly(k)
    rhs = binomial_poly(k).scale((k - r) * factorial(k)) + binomial_poly(k + 1).scale(
        factorial(k + 1)
    )
    return lhs, rhs, lhs == rhs
