"""Closed-form rank-bound shapes, unit constants, natural logs.

These are the *shapes* of the proven bounds with all hidden constants
set to 1 (the second integrality branch constant is likewise taken as
1 and flagged).  They are not certified ranks; every consumer labels
them accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..model import KnapsackInstance

SHAPE_NOTE = "shape, unit constants; integrality second-branch constant taken as 1"


@dataclass(frozen=True)
class BoundShape:
    baseline: float  # min(ceil q, n - floor q)
    integrality: float  # branch formula, lower regime only
    upper_lower_layers: float  # sqrt(n) log(2/q_hat) + sqrt(n floor q) log n
    upper_upper_layers: float  # n - floor q
    smoothed: float | None  # sqrt(n)(sqrt(q) log n + log(1/sigma)), needs sigma
    note: str = SHAPE_NOTE


def log_of_fraction(f: Fraction) -> float:
    """log of an exact rational without float under/overflow of the ratio."""
    return math.log(f.numerator) - math.log(f.denominator)


def bound_shapes(inst: KnapsackInstance, sigma: float | None = None) -> BoundShape:
    """Piecewise shapes per regime; all-zero when the rank is trivially 0."""
    n, q = inst.n, inst.q
    if inst.q_hat == 0 or not (0 <= q <= n):
        return BoundShape(0.0, 0.0, 0.0, 0.0, 0.0 if sigma else None)
    log_inv_qh = log_of_fraction(1 / inst.q_hat)
    baseline = float(min(inst.ceil_q, n - inst.floor_q))
    lower = 0 < q < n // 2
    integrality = 0.0
    if lower:
        if inst.q_hat <= Fraction(1, 2):
            integrality = min(float(n), math.sqrt(n * log_inv_qh))
        else:
            integrality = math.sqrt(n * float(1 - inst.q_hat))
    upper_lower = (
        math.sqrt(n) * log_of_fraction(2 / inst.q_hat) + math.sqrt(n * inst.floor_q) * math.log(n)
        if lower
        else 0.0
    )
    upper_upper = float(n - inst.floor_q) if not lower else 0.0
    smoothed = None
    if sigma is not None:
        smoothed = (
            math.sqrt(n) * (math.sqrt(float(q)) * math.log(n) + math.log(1 / sigma))
            if lower
            else 0.0
        )
    return BoundShape(baseline, integrality, upper_lower, upper_upper, smoothed)
