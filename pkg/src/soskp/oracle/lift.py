"""Interval nonnegativity -> parity-form SOS decomposition on [0, n].

A polynomial p >= 0 on [0, n] splits as

    p = t1 + t2 * x(n - x)          (deg p even)
    p = x * t1 + (n - x) * t2       (deg p odd)

with t1, t2 sums of squares, deg t_i <= deg p.  Both |x| and n - |x|
have constant-degree SOS certificates over the hypercube, so this lifts
univariate nonnegativity to hypercube SOS-ness.

The Gram feasibility problem is posed in the Chebyshev basis of [0, n]
(products of basis elements expand exactly), solved with the shared
interior-point machinery, and the Gram entries are then polished by a
high-precision least-squares pass so the reconstruction residual sits
far below the requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from ..errors import LiftingError
from ..numerics import HPF, HPFloat, UniPoly, cheb_T
from ..numerics.hpfloat import context_for
from .feasible import solve_max_lmin
from .hplinalg import residual_fix, sym_eig_min
from .sdp import Block, Constraint, SdpProblem, Term

EVEN = "even:t1+t2*x(n-x)"
ODD = "odd:x*t1+(n-x)*t2"


@dataclass
class LiftResult:
    parity_form: str
    t1: UniPoly
    t2: UniPoly
    gram1: np.ndarray
    gram2: np.ndarray
    residual: float
    min_gram_eigenvalue: float
    scale: float


def _power_to_cheb(poly: UniPoly) -> list[HPFloat]:
    """Chebyshev coefficients of a polynomial given in the power basis on [-1,1]."""
    prec = poly.prec
    a = [HPFloat._raw(c, prec) for c in poly.coeffs]
    D = len(a) - 1
    gamma = [HPFloat(0, prec)] * (D + 1)
    for k in range(D, 1, -1):
        lead = a[k] / (Fraction(2) ** (k - 1))
        gamma[k] = lead
        for j, tc in enumerate(cheb_T(k).coeffs):
            if tc:
                a[j] = a[j] - lead * tc
    if D >= 1:
        gamma[1] = a[1]
    gamma[0] = a[0]
    return gamma


def _cheb_to_power(gamma: list[HPFloat], prec: int) -> UniPoly:
    out = UniPoly.zero(HPF, prec)
    for k, g in enumerate(gamma):
        if g == 0:
            continue
        out = out + cheb_T(k).to_hpfloat(prec).scale(g)
    return out


def _add(d: dict, k: int, i: int, j: int, w: Fraction):
    if w:
        M = d.setdefault(k, {})
        M[(i, j)] = M.get((i, j), Fraction(0)) + w


def _product_weights(i: int, j: int) -> list[tuple[int, Fraction]]:
    """T_i T_j = 1/2 (T_{i+j} + T_{|i-j|})."""
    return [(i + j, Fraction(1, 2)), (abs(i - j), Fraction(1, 2))]


def _times_T(indices: list[tuple[int, Fraction]], t: int, sign: int) -> list[tuple[int, Fraction]]:
    """Multiply a Chebyshev combination by (T_0 + sign*T_t)."""
    out = list(indices)
    for k, w in indices:
        half = w * Fraction(sign, 2)
        out.append((k + t, half))
        out.append((abs(k - t), half))
    return out


def lift_nonneg(
    p: UniPoly,
    n: int,
    d_budget: int | None = None,
    tol: float = 1e-9,
    psd_tol: float = 1e-7,
) -> LiftResult:
    """Decompose p (nonnegative on [0, n]) in the parity form of deg p."""
    if p.kind != HPF:
        p = p.to_hpfloat(256)
    prec = p.prec
    D = p.degree
    if D < 0:
        raise LiftingError("zero polynomial has no decomposition to report")

    grid = [Fraction(k, 8) for k in range(8 * n + 1)]
    vals = [p(HPFloat(x, prec)) for x in grid]
    sup = max(abs(v) for v in vals)
    scale = max(float(sup), 1e-300)
    if min(vals) < -tol * (1 + sup):
        raise LiftingError("polynomial is negative on the grid; nothing to decompose")

    if D == 0:
        c0 = p.coefficient(0)
        return LiftResult(
            EVEN,
            p,
            UniPoly.zero(HPF, prec),
            np.array([[float(c0)]]),
            np.zeros((0, 0)),
            0.0,
            min(0.0, float(c0)),
            scale,
        )

    if d_budget is not None and d_budget < D:
        raise LiftingError(f"parity form needs deg t_i up to {D}, budget is {d_budget}")

    # Chebyshev coefficients of p(n(u+1)/2) / scale on u in [-1, 1]
    inv_scale = 1 / HPFloat(sup, prec)
    pu = p.compose_affine(Fraction(n, 2), Fraction(n, 2)).scale(inv_scale)
    gamma = _power_to_cheb(pu)

    even = D % 2 == 0
    if even:
        n1, n2 = D // 2 + 1, D // 2
    else:
        n1 = n2 = (D + 1) // 2

    M1: dict[int, dict] = {}
    M2: dict[int, dict] = {}
    for i in range(n1):
        for j in range(n1):
            base = _product_weights(i, j)
            if even:
                for k, w in base:
                    _add(M1, k, i, j, w)
            else:
                for k, w in _times_T(base, 1, +1):  # x = n/2 (T0 + T1)
                    _add(M1, k, i, j, w * Fraction(n, 2))
    for i in range(n2):
        for j in range(n2):
            base = _product_weights(i, j)
            if even:
                # x(n - x) = n^2/8 (T0 - T2) in u
                for k, w in _times_T(base, 2, -1):
                    _add(M2, k, i, j, w * Fraction(n * n, 8))
            else:
                # n - x = n/2 (T0 - T1)
                for k, w in _times_T(base, 1, -1):
                    _add(M2, k, i, j, w * Fraction(n, 2))

    blocks = [Block("t1_gram", n1)]
    if n2 > 0:
        blocks.append(Block("t2_gram", n2))
    constraints = []
    for k in range(D + 1):
        terms = []
        if k in M1:
            mat = tuple(
                tuple(M1[k].get((i, j), Fraction(0)) for j in range(n1)) for i in range(n1)
            )
            terms.append(Term(block=0, scale=Fraction(1), matrix=mat))
        if n2 > 0 and k in M2:
            mat = tuple(
                tuple(M2[k].get((i, j), Fraction(0)) for j in range(n2)) for i in range(n2)
            )
            terms.append(Term(block=1, scale=Fraction(1), matrix=mat))
        rhs = gamma[k].as_fraction() if k < len(gamma) else Fraction(0)
        constraints.append(Constraint(terms=tuple(terms), rhs=rhs, label=f"cheb coeff {k}"))
    problem = SdpProblem(blocks, constraints, meta={"lift_degree": D}).validate()

    sol = solve_max_lmin(problem)
    if sol.detail.get("ipm_status") == "inconsistent":
        raise LiftingError("coefficient-matching system inconsistent")
    G1 = sol.witness_raw["t1_gram"]
    G2 = sol.witness_raw.get("t2_gram", np.zeros((0, 0)))
    G1, G2 = _polish(problem, G1, G2, prec=192)

    min_eig = float(sym_eig_min(G1, 192)) if n1 else 0.0
    if n2 > 0:
        min_eig = min(min_eig, float(sym_eig_min(G2, 192)))
    if min_eig < -psd_tol:
        raise LiftingError(
            f"Gram witness not PSD to tolerance (min eigenvalue {min_eig:.3g}); "
            "polynomial may not be nonnegative or precision too low"
        )

    t1 = _gram_poly(G1, n, prec)
    t2 = _gram_poly(G2, n, prec) if n2 > 0 else UniPoly.zero(HPF, prec)
    t1 = t1.scale(HPFloat(sup, prec))
    t2 = t2.scale(HPFloat(sup, prec))

    worst = 0.0
    w_even = UniPoly([Fraction(0), Fraction(n), Fraction(-1)])  # x(n-x)
    for x in grid:
        xv = HPFloat(x, prec)
        if even:
            rec = t1(xv) + t2(xv) * HPFloat(w_even(x), prec)
        else:
            rec = xv * t1(xv) + (n - xv) * t2(xv)
        worst = max(worst, abs(float(rec - p(xv))))
    if worst > tol * (1 + scale):
        raise LiftingError(f"reconstruction residual {worst:.3g} exceeds tolerance")
    return LiftResult(
        EVEN if even else ODD, t1, t2, G1, G2, worst, min_eig, scale
    )


def _gram_poly(G: np.ndarray, n: int, prec: int) -> UniPoly:
    """sum_{ij} G_ij T_i(u) T_j(u) with u = (2x - n)/n, as a dense poly in x."""
    size = G.shape[0]
    if size == 0:
        return UniPoly.zero(HPF, prec)
    gamma = [HPFloat(0, prec)] * (2 * size - 1)
    for i in range(size):
        for j in range(size):
            g = HPFloat(float(G[i, j]), prec)
            for k, w in _product_weights(i, j):
                gamma[k] = gamma[k] + g * w
    poly_u = _cheb_to_power(gamma, prec)
    return poly_u.compose_affine(Fraction(2, n), Fraction(-1))


def _polish(problem: SdpProblem, G1: np.ndarray, G2: np.ndarray, prec: int):
    """High-precision least-squares pass driving the coefficient residual down."""
    n1 = G1.shape[0]
    n2 = G2.shape[0]
    nvar = n1 * n1 + n2 * n2
    ctx = context_for(prec)
    x = [gmpy2.mpfr(0, prec)] * nvar
    for i in range(n1):
        for j in range(n1):
            x[i * n1 + j] = gmpy2.mpfr(float(G1[i, j]), prec)
    for i in range(n2):
        for j in range(n2):
            x[n1 * n1 + i * n2 + j] = gmpy2.mpfr(float(G2[i, j]), prec)
    rows, rhs = [], []
    for con in problem.constraints:
        row = [gmpy2.mpfr(0, prec)] * nvar
        for t in con.terms:
            mat = t.matrix
            if t.block == 0:
                for i in range(n1):
                    for j in range(n1):
                        row[i * n1 + j] = gmpy2.mpfr(
                            gmpy2.mpq(mat[i][j].numerator, mat[i][j].denominator), prec
                        )
            else:
                for i in range(n2):
                    for j in range(n2):
                        row[n1 * n1 + i * n2 + j] = gmpy2.mpfr(
                            gmpy2.mpq(mat[i][j].numerator, mat[i][j].denominator), prec
                        )
        rows.append(row)
        rhs.append(gmpy2.mpfr(gmpy2.mpq(con.rhs.numerator, con.rhs.denominator), prec))
    x2, _ = residual_fix(rows, rhs, x, prec)
    H1 = np.array([[float(x2[i * n1 + j]) for j in range(n1)] for i in range(n1)]) if n1 else G1
    H2 = (
        np.array([[float(x2[n1 * n1 + i * n2 + j]) for j in range(n2)] for i in range(n2)])
        if n2
        else G2
    )
    return 0.5 * (H1 + H1.T), 0.5 * (H2 + H2.T)
