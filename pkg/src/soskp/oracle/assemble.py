"""Gram-matrix feasibility programs for the degree-d certificate identity.

Dense: one Gram block per SOS multiplier over the multilinear monomial
basis, one linear constraint per point of {0,1}^n.

Symmetric: certificates may be symmetrized, which collapses the 2^n
point constraints to the n+1 Hamming levels.  A symmetrized SOS of
degree 2t evaluates on level k as

    sum_l  d_l(k) u_l(k),   d_l(k) = prod_{i<l} (k - i)(n - k - i),

with u_l a univariate SOS of degree 2(t - l).  This reduction is
validated empirically against the dense formulation (exact status match
on the cross-validation grid); any disagreement is a release-blocking
bug.  Gram bases use Chebyshev values in (2k-n)/n and the d_l factors
are normalized by (n/2)^{2l} to keep float64 conditioning sane.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..errors import SizeGuardError
from ..model import KnapsackInstance
from ..numerics import cheb_T
from .sdp import Block, Constraint, SdpProblem, Term

DENSE_GUARD_N = 8


def _monomials(n: int, max_deg: int) -> list[tuple[int, ...]]:
    """Multilinear monomials as sorted index tuples, by (degree, lex)."""
    out = []
    for k in range(min(max_deg, n) + 1):
        out.extend(combinations(range(n), k))
    return out


def assemble_dense(inst: KnapsackInstance, d: int, guard_n: int = DENSE_GUARD_N) -> SdpProblem:
    """Point-constraint Gram feasibility for the degree-d program.

    Blocks: s0 over monomials of degree <= d+1, s1 over degree <= d.
    For every x in {0,1}^n:  |x| - ceil q = s0(x) + (|x| - q) s1(x).
    """
    n = inst.n
    if n > guard_n:
        raise SizeGuardError(f"dense assembly guarded at n <= {guard_n}, got n={n}")
    if d < 0:
        raise ValueError("d must be >= 0")
    mon0 = _monomials(n, d + 1)
    mon1 = _monomials(n, d)
    blocks = [Block("s0_gram", len(mon0)), Block("s1_gram", len(mon1))]

    def eval_vec(mons, point) -> tuple[Fraction, ...]:
        return tuple(
            Fraction(1) if all(point[i] for i in mon) else Fraction(0) for mon in mons
        )

    constraints = []
    kernels: dict[int, list[tuple[Fraction, ...]]] = {0: [], 1: []}
    level = inst.ceil_q if inst.q_hat != 0 else (int(inst.q) if 0 <= inst.q <= n else None)
    for bits in range(2**n):
        point = tuple((bits >> i) & 1 for i in range(n))
        w = sum(point)
        v0 = eval_vec(mon0, point)
        v1 = eval_vec(mon1, point)
        constraints.append(
            Constraint(
                terms=(
                    Term(block=0, scale=Fraction(1), vector=v0),
                    Term(block=1, scale=w - inst.q, vector=v1),
                ),
                rhs=Fraction(w - inst.ceil_q),
                label=f"point {point}",
            )
        )
        if level is not None and w == level and 0 <= level <= n:
            kernels[0].append(v0)
            if inst.q_hat != 0:
                kernels[1].append(v1)
    forced = {bi: ks for bi, ks in kernels.items() if ks}
    return SdpProblem(
        blocks,
        constraints,
        forced_kernels=forced,
        meta={"method": "dense", "n": n, "d": d, "q": inst.q},
    ).validate()


def _d_factor(n: int, k: int, ell: int) -> Fraction:
    out = Fraction(1)
    for i in range(ell):
        out *= (k - i) * (n - k - i)
    return out


def _cheb_basis_values(n: int, k: int, size: int) -> tuple[Fraction, ...]:
    t = Fraction(2 * k - n, n)
    return tuple(cheb_T(j)(t) for j in range(size))


def assemble_symmetric(inst: KnapsackInstance, d: int) -> SdpProblem:
    """Hamming-level Gram feasibility over the symmetry-reduced blocks."""
    if d < 0:
        raise ValueError("d must be >= 0")
    n = inst.n
    half = n // 2
    norm = Fraction(n, 2) ** 2

    def make_blocks(t: int, tag: str):
        specs = []
        for ell in range(min(t, half) + 1):
            size = min(t - ell, n - 2 * ell) + 1
            specs.append((f"{tag}_l{ell}", ell, size))
        return specs

    s0_specs = make_blocks(d + 1, "s0")
    s1_specs = make_blocks(d, "s1")
    blocks = [Block(name, size) for name, _, size in s0_specs + s1_specs]
    s1_offset = len(s0_specs)

    constraints = []
    kernels: dict[int, list[tuple[Fraction, ...]]] = {}
    level = inst.ceil_q if inst.q_hat != 0 else (int(inst.q) if 0 <= inst.q <= n else None)
    for k in range(n + 1):
        terms = []
        for bi, (_, ell, size) in enumerate(s0_specs):
            dfac = _d_factor(n, k, ell) / norm**ell
            if dfac == 0:
                continue
            terms.append(Term(block=bi, scale=dfac, vector=_cheb_basis_values(n, k, size)))
        for bj, (_, ell, size) in enumerate(s1_specs):
            dfac = _d_factor(n, k, ell) / norm**ell
            if dfac == 0:
                continue
            terms.append(
                Term(
                    block=s1_offset + bj,
                    scale=dfac * (k - inst.q),
                    vector=_cheb_basis_values(n, k, size),
                )
            )
        constraints.append(
            Constraint(terms=tuple(terms), rhs=Fraction(k - inst.ceil_q), label=f"level k={k}")
        )
        if level is not None and k == level:
            for bi, (_, ell, size) in enumerate(s0_specs):
                if _d_factor(n, k, ell) != 0:
                    kernels.setdefault(bi, []).append(_cheb_basis_values(n, k, size))
            if inst.q_hat != 0:
                for bj, (_, ell, size) in enumerate(s1_specs):
                    if _d_factor(n, k, ell) != 0:
                        kernels.setdefault(s1_offset + bj, []).append(
                            _cheb_basis_values(n, k, size)
                        )
    return SdpProblem(
        blocks,
        constraints,
        forced_kernels=kernels,
        meta={"method": "symmetric", "n": n, "d": d, "q": inst.q},
    ).validate()
