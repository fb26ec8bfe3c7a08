"""Chebyshev-power certificate for the lower Hamming layers (q < floor(n/2)).

sigma1 = tau^2 with tau = (1/8) T_d((x - ceil(q) + r0)/N - 1)^m,
N = n - floor(q), d = ceil(3 sqrt(N)), m = ceil(log2(64/q_hat)/2);
r0 is the smallest root of T_d(x/N - 1), so sigma1 vanishes at ceil(q)
and decays Chebyshev-fast to its left.

Dense power-basis coefficients of such polynomials need roughly
1.9 * deg(sigma1) bits before Horner evaluation in the middle of [0, n]
means anything (the alternating coefficients cancel massively).  We
build the dense form at that "evaluable" precision while it is
affordable and fall back to a capped precision beyond, in which case
grid evaluation goes through the exactly-equivalent closed form
T_d(u)^{2m}/64 evaluated per point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import RegimeError
from ..model import KnapsackInstance
from ..numerics import HPF, HPFloat, UniPoly, cheb_T, cheb_eval, smallest_root_shifted_cheb
from ..numerics.hpfloat import default_precision

# beyond this, dense coefficients are built at CAPPED_BUILD_PRECISION and
# certificates are flagged as not grid-evaluable from coefficients alone
EVALUABLE_PRECISION_CAP = 5000
CAPPED_BUILD_PRECISION = 512
_GUARD_BITS = 192


@dataclass(frozen=True)
class LowerMeta:
    d: int
    m: int
    N: int
    r0: HPFloat
    tau: UniPoly
    precision_bits: int
    dense_grid_reliable: bool


def lower_params(inst: KnapsackInstance) -> tuple[int, int, int]:
    """(d, m, N) with d = ceil(3 sqrt(N)), m = ceil(log2(64/q_hat)/2), exact."""
    N = inst.n - inst.floor_q
    d = math.isqrt(9 * N)
    if d * d < 9 * N:
        d += 1
    qh = inst.q_hat
    m = 0
    while qh * 4**m < 64:
        m += 1
    return d, m, N


def in_lower_regime(inst: KnapsackInstance) -> bool:
    return 0 < inst.q < inst.n // 2 and inst.q_hat != 0


def evaluable_precision(inst: KnapsackInstance, d: int, m: int, N: int) -> int:
    """Bits needed to Horner-evaluate the dense sigma1 anywhere on [0, n].

    The coefficients of sigma1 alternate in sign, so the Horner
    conditioning sum at x equals |sigma1(-x)|, maximal at x = n.
    """
    u = 2.0 + (inst.ceil_q + inst.floor_q - 0.0) / N  # r0 >= 0 only helps
    bits = 2 * m * d * math.acosh(u) / math.log(2.0)
    return int(bits) + _GUARD_BITS


def build_sigma1_lower(inst: KnapsackInstance, prec: int | None = None) -> tuple[UniPoly, LowerMeta]:
    """Construct sigma1 = tau^2 and its metadata for a lower-regime instance."""
    if not in_lower_regime(inst):
        raise RegimeError(
            f"{inst} outside the lower-layer regime 0 < q < floor(n/2) with non-integral q"
        )
    if prec is None:
        prec = default_precision()
    d, m, N = lower_params(inst)
    p_eval = evaluable_precision(inst, d, m, N)
    if p_eval <= EVALUABLE_PRECISION_CAP:
        build_prec = max(prec, p_eval)
        reliable = True
    else:
        build_prec = max(prec, CAPPED_BUILD_PRECISION)
        reliable = build_prec >= p_eval
    r0 = smallest_root_shifted_cheb(d, N, build_prec)
    alpha = HPFloat(Fraction(1, N), build_prec)
    beta = (r0 - inst.ceil_q) / N - 1
    base = cheb_T(d).to_hpfloat(build_prec).compose_affine(alpha, beta)
    tau = (base**m).scale(Fraction(1, 8))
    sigma1 = tau * tau
    meta = LowerMeta(d, m, N, r0, tau, build_prec, reliable)
    return sigma1, meta


# -- closed-form evaluation ----------------------------------------------------


def lower_base_at(inst: KnapsackInstance, meta: LowerMeta, x, prec: int) -> HPFloat:
    """T_d at the affine argument, via the trig/hyperbolic closed form."""
    work = prec + 48 + (2 * meta.m * meta.d).bit_length()
    xv = x if isinstance(x, HPFloat) else HPFloat(Fraction(x), work)
    u = (xv.with_precision(work) - inst.ceil_q + meta.r0.with_precision(work)) / meta.N - 1
    return cheb_eval(meta.d, u)


def lower_sigma1_at(inst: KnapsackInstance, meta: LowerMeta, x, prec: int | None = None) -> HPFloat:
    prec = prec or default_precision()
    t = lower_base_at(inst, meta, x, prec)
    return ((t * t) ** meta.m / 64).with_precision(prec)


def lower_tau_at(inst: KnapsackInstance, meta: LowerMeta, x, prec: int | None = None) -> HPFloat:
    prec = prec or default_precision()
    t = lower_base_at(inst, meta, x, prec)
    return (t**meta.m / 8).with_precision(prec)


def lower_sigma0_at(inst: KnapsackInstance, meta: LowerMeta, x, prec: int | None = None) -> HPFloat:
    """sigma0 = (x - ceil q) - (x - q) sigma1 through the closed form."""
    return lower_values_at(inst, meta, x, prec)[1]


def lower_values_at(
    inst: KnapsackInstance, meta: LowerMeta, x, prec: int | None = None
) -> tuple[HPFloat, HPFloat]:
    """(sigma1(x), sigma0(x)) from one Chebyshev evaluation."""
    prec = prec or default_precision()
    work = prec + 32
    xv = (x if isinstance(x, HPFloat) else HPFloat(Fraction(x), work)).with_precision(work)
    t = lower_base_at(inst, meta, xv, work)
    s1 = (t * t) ** meta.m / 64
    s0 = (xv - inst.ceil_q) - (xv - Fraction(inst.q)) * s1
    return s1.with_precision(prec), s0.with_precision(prec)


# -- lemma checks ---------------------------------------------------------------


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    passed: bool
    margin: float
    detail: str = ""


def _grid(lo: Fraction, hi: Fraction, density: int) -> list[Fraction]:
    step = Fraction(1, density)
    pts = []
    x = Fraction(lo)
    while x < hi:
        pts.append(x)
        x += step
    pts.append(Fraction(hi))
    return pts


def check_lower_constraints(
    inst: KnapsackInstance, meta: LowerMeta, grid_density: int = 4, prec: int | None = None
) -> list[LemmaCheck]:
    """Grid checks of the three envelope constraints on sigma1.

    (1) sigma1 > 1/q_hat on [0, floor q];
    (2) sigma1 <= (x - ceil q)/2 on [ceil q, ceil q + 1];
    (3) sigma1 <= 1/2 on [ceil q + 1, n].
    Failures are reported, not raised.
    """
    prec = prec or default_precision()
    fq, cq, n = inst.floor_q, inst.ceil_q, inst.n
    inv_qhat = HPFloat(1 / inst.q_hat, prec)
    checks = []

    margin1 = None
    for x in _grid(Fraction(0), Fraction(fq), grid_density):
        v = lower_sigma1_at(inst, meta, x, prec) - inv_qhat
        if margin1 is None or v < margin1:
            margin1 = v
    ok1 = margin1 is not None and margin1 > 0
    checks.append(
        LemmaCheck("constraint_1_above_inv_qhat", bool(ok1), float(margin1), "min sigma1 - 1/q_hat on [0, floor q]")
    )

    margin2 = None
    for x in _grid(Fraction(cq), Fraction(cq + 1), grid_density):
        cap = HPFloat((Fraction(x) - cq) / 2, prec)
        v = cap - lower_sigma1_at(inst, meta, x, prec)
        if margin2 is None or v < margin2:
            margin2 = v
    slack = HPFloat(2, prec) ** (-(prec // 2))
    ok2 = margin2 is not None and margin2 >= -slack
    checks.append(
        LemmaCheck("constraint_2_linear_cap", bool(ok2), float(margin2), "min (x-ceil q)/2 - sigma1 on [ceil q, ceil q+1]")
    )

    margin3 = None
    if cq + 1 <= n:
        half = HPFloat(Fraction(1, 2), prec)
        for x in _grid(Fraction(cq + 1), Fraction(n), grid_density):
            v = half - lower_sigma1_at(inst, meta, x, prec)
            if margin3 is None or v < margin3:
                margin3 = v
        ok3 = margin3 >= 0
    else:
        ok3, margin3 = True, HPFloat(0, prec)
    checks.append(
        LemmaCheck("constraint_3_half_cap", bool(ok3), float(margin3), "min 1/2 - sigma1 on [ceil q+1, n]")
    )
    return checks
