"""Interpolation certificate for the upper Hamming layers (q > floor(n/2)).

sigma1 = L^2 + V where L interpolates f(x) = sqrt((x - ceil q)/(x - q))
at the integer nodes ceil q .. n and

    V(x) = (1/(q_hat (n - floor q)!)) prod_{j=ceil q}^n (j - x)

is exact-rational, vanishes at the nodes, and equals 1/q_hat at floor q.
When ceil q = n there is a single node with f(n) = 0 and L is the zero
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..errors import RegimeError
from ..model import KnapsackInstance
from ..numerics import HPFloat, RATIONAL, UniPoly, newton_interpolate
from ..numerics.hpfloat import default_precision
from ..numerics.interpolate import interpolation_precision


@dataclass(frozen=True)
class UpperMeta:
    L: UniPoly
    V: UniPoly  # exact rational
    precision_bits: int
    dense_grid_reliable: bool = True


def in_upper_regime(inst: KnapsackInstance) -> bool:
    return inst.n // 2 < inst.q < inst.n and inst.q_hat != 0


def hyperbola_value(inst: KnapsackInstance, x: Fraction) -> Fraction:
    """(x - ceil q)/(x - q), exact; the target sigma1 matches at the nodes."""
    x = Fraction(x)
    return (x - inst.ceil_q) / (x - inst.q)


def f_sqrt_at(inst: KnapsackInstance, x, prec: int) -> HPFloat:
    """f(x) = sqrt((x - ceil q)/(x - q)), defined off [q, ceil q)."""
    if isinstance(x, HPFloat):
        ratio = (x - inst.ceil_q) / (x - Fraction(inst.q))
        return ratio.with_precision(prec).sqrt()
    return HPFloat(hyperbola_value(inst, x), prec).sqrt()


def build_V(inst: KnapsackInstance) -> UniPoly:
    """Exact rational V; V(floor q) = 1/q_hat, V = 0 at ceil q .. n."""
    poly = UniPoly.const(Fraction(1) / inst.q_hat, RATIONAL)
    poly = poly.scale(Fraction(1, factorial(inst.n - inst.floor_q)))
    for j in range(inst.ceil_q, inst.n + 1):
        poly = poly * UniPoly([Fraction(j), Fraction(-1)])
    return poly


def build_sigma1_upper(inst: KnapsackInstance, prec: int | None = None) -> tuple[UniPoly, UpperMeta]:
    """Construct sigma1 = L^2 + V and its metadata for an upper-regime instance."""
    if not in_upper_regime(inst):
        raise RegimeError(
            f"{inst} outside the upper-layer regime floor(n/2) < q < n with non-integral q"
        )
    n_nodes = inst.n - inst.floor_q
    prec = interpolation_precision(n_nodes, prec or default_precision())
    if inst.ceil_q == inst.n:
        L = UniPoly.zero(kind="hpfloat", prec=prec)
    else:
        nodes = [Fraction(j) for j in range(inst.ceil_q, inst.n + 1)]
        values = [f_sqrt_at(inst, j, prec) for j in nodes]
        L = newton_interpolate(nodes, values, prec)
    V = build_V(inst)
    if L.is_zero():
        sigma1 = V.to_hpfloat(prec)
    else:
        sigma1 = L * L + V.to_hpfloat(prec)
    return sigma1, UpperMeta(L, V, prec)


def build_M(inst: KnapsackInstance, prec: int | None = None) -> UniPoly:
    """Interpolant of h(x) = 1/sqrt((x - ceil q)(x - q)) at ceil q + 1 .. n.

    L factors as (x - ceil q) M(x); M is non-increasing left of
    ceil q + 1, which is what makes L monotone through its sign change.
    Exposed for verification; requires ceil q < n.
    """
    if inst.ceil_q >= inst.n:
        raise RegimeError("M needs at least one node beyond ceil q")
    n_nodes = inst.n - inst.ceil_q
    prec = interpolation_precision(n_nodes, prec or default_precision())
    nodes = [Fraction(j) for j in range(inst.ceil_q + 1, inst.n + 1)]
    values = [
        1 / (HPFloat((j - inst.ceil_q) * (j - inst.q), prec).sqrt()) for j in nodes
    ]
    return newton_interpolate(nodes, values, prec)
