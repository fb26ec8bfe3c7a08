"""Newton divided-difference interpolation at high precision."""

from __future__ import annotations

from fractions import Fraction

from .hpfloat import HPFloat, default_precision
from .unipoly import HPF, UniPoly


def interpolation_precision(n_nodes: int, base: int | None = None) -> int:
    """Working precision for interpolation on n_nodes equispaced nodes.

    Equispaced-node divided differences lose O(n_nodes) bits, so the
    default escalates at 8 bits per node.
    """
    if base is None:
        base = default_precision()
    return max(base, 8 * n_nodes)


def newton_interpolate(nodes: list[Fraction], values: list[HPFloat], prec: int | None = None) -> UniPoly:
    """Unique polynomial of degree <= len(nodes)-1 through (nodes, values).

    Nodes are exact rationals; values are HPFloat.  Built in Newton form
    from the divided-difference table, then expanded to dense
    coefficients.
    """
    if len(nodes) != len(values):
        raise ValueError("nodes and values must have equal length")
    if not nodes:
        raise ValueError("need at least one node")
    if len(set(nodes)) != len(nodes):
        raise ValueError("duplicate interpolation nodes")
    k = len(nodes)
    if prec is None:
        prec = interpolation_precision(k, min(v.prec for v in values))
    xs = [Fraction(x) for x in nodes]
    # divided differences, one diagonal kept
    table = [v.with_precision(prec) for v in values]
    dd = [table[0]]
    for j in range(1, k):
        for i in range(k - j):
            table[i] = (table[i + 1] - table[i]) / (xs[i + j] - xs[i])
        dd.append(table[0])
    # expand sum_j dd[j] * prod_{i<j} (x - x_i) densely, Horner-style
    poly = UniPoly.const(dd[k - 1], HPF, prec)
    for j in range(k - 2, -1, -1):
        poly = poly * UniPoly([-xs[j], 1], HPF, prec)
        poly = poly + UniPoly.const(dd[j], HPF, prec)
    return poly
