"""Derived objects: refutation identities, shifted witnesses, explicit SOS factors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InvalidCertificateError, PrecisionEscalationNeeded
from ..numerics import HPF, HPFloat, UniPoly
from ..numerics.hpfloat import default_precision
from .akr import akr_polynomial
from .certificate import LOWER, UPPER, Certificate
from .lower import lower_sigma1_at
from .verify import DEFAULT_TOL, _bisect_root


@dataclass(frozen=True)
class Refutation:
    """-1 = h + g (x - q) on the integer grid; h inherits nonnegativity."""

    h: UniPoly
    g: UniPoly
    conditioning: float  # 1/(ceil q - q); blows up as q_hat -> 1
    max_residual: HPFloat
    min_h_on_grid: HPFloat
    passed: bool


def to_refutation(cert: Certificate, tol: float = DEFAULT_TOL, prec: int | None = None) -> Refutation:
    """Transform the optimality identity into a refutation identity."""
    prec = prec or min(cert.precision_bits, default_precision())
    inst = cert.inst
    gap = Fraction(inst.ceil_q) - inst.q  # = 1 - q_hat > 0
    c = Fraction(1) / gap
    one = UniPoly.const(Fraction(1), kind=cert.sigma1.kind, prec=cert.sigma1.prec)
    g = (cert.sigma1 - one).scale(c)
    h = cert.sigma0.scale(c)

    worst = HPFloat(0, prec)
    min_h = None
    for k in range(inst.n + 1):
        hv = cert.sigma0_at(k, prec) * c
        gv = (cert.sigma1_at(k, prec) - 1) * c
        r = abs(hv + gv * (k - inst.q) + 1)
        if r > worst:
            worst = r
        if min_h is None or hv < min_h:
            min_h = hv
    scale = (abs(min_h) + 1) * float(c)
    passed = float(worst) <= tol * max(1.0, scale) and float(min_h) >= -tol * max(1.0, scale)
    return Refutation(h, g, float(c), worst, min_h, passed)


@dataclass(frozen=True)
class CRWitness:
    """P(x) = sigma1(x + floor q)/sigma1(floor q): equals 1 at 0 and stays
    inside [0, q_hat] on 1 .. n - floor q, the separation a low-degree
    polynomial cannot sustain."""

    P: UniPoly
    values: list[float]
    checks: dict[str, bool]
    passed: bool


def extract_CR_witness(cert: Certificate, tol: float = DEFAULT_TOL, prec: int | None = None) -> CRWitness:
    if cert.regime != LOWER:
        raise InvalidCertificateError("witness extraction applies to lower-regime certificates")
    prec = prec or min(cert.precision_bits, default_precision())
    inst = cert.inst
    fq = inst.floor_q
    denom = cert.sigma1_at(fq, cert.precision_bits)
    if denom <= 0:
        raise InvalidCertificateError("sigma1(floor q) <= 0; not a valid certificate")

    shifted = cert.sigma1 if fq == 0 else cert.sigma1.compose_affine(Fraction(1), Fraction(fq))
    c0 = shifted.coefficient(0)
    P = shifted.scale(1 / c0)

    values = []
    ok_range = True
    qhat = inst.q_hat
    for j in range(1, inst.n - fq + 1):
        if cert.regime == LOWER and not cert.dense_grid_reliable:
            pv = lower_sigma1_at(inst, cert.meta, j + fq, prec) / denom
        else:
            pv = cert.sigma1_at(j + fq, prec) / denom
        values.append(float(pv))
        if not (-tol <= pv <= qhat + tol):
            ok_range = False
    checks = {
        "P_at_0_is_1": P.coefficient(0) == 1,
        "values_in_0_qhat": ok_range,
        "degree_preserved": P.degree == cert.sigma1.degree,
    }
    return CRWitness(P, values, checks, all(checks.values()))


@dataclass(frozen=True)
class SosDecomposition:
    """sigma0 = p(x) (x - r) prod_j (x - j)^(2 mu_j + 1) with the block
    pieces that make s0 an explicit hypercube SOS: the consecutive-roots
    identity at (n - floor q, n - r) and an interval lifting of the
    sign-corrected leftover p."""

    p: UniPoly
    r: HPFloat
    r_rational: Fraction
    multiplicities: dict[int, int]
    akr_k: int
    akr_r: Fraction
    akr_equal: bool
    sign: int  # (-1)^(n - ceil q); sign * p > 0 on [0, n]
    lift: object
    factorization_residual: HPFloat


def _deflate_once(poly: UniPoly, root: HPFloat) -> tuple[UniPoly, HPFloat]:
    """Synthetic division by (x - root); returns (quotient, remainder)."""
    prec = poly.prec
    cs = list(poly.coeffs)
    out = [None] * (len(cs) - 1)
    acc = HPFloat._raw(cs[-1], prec)
    rv = root.with_precision(prec)
    for i in range(len(cs) - 2, -1, -1):
        out[i] = acc
        acc = acc * rv + HPFloat._raw(cs[i], prec)
    quot = UniPoly([c for c in out], kind=HPF, prec=prec)
    return quot, acc


def materialize_upper_sos(
    cert: Certificate, tol: float = DEFAULT_TOL, prec: int | None = None
) -> SosDecomposition:
    """Factor a verified upper-regime sigma0 into its SOS building blocks."""
    from ..oracle.lift import lift_nonneg

    if cert.regime != UPPER:
        raise InvalidCertificateError("materialization applies to upper-regime certificates")
    inst = cert.inst
    prec = prec or cert.precision_bits
    n, fq, cq = inst.n, inst.floor_q, inst.ceil_q

    sup = max(abs(HPFloat._raw(c, cert.sigma0.prec)) for c in cert.sigma0.coeffs)
    div_tol = sup * (HPFloat(2, prec) ** (-(cert.precision_bits // 3)))

    # locate the extra root
    v_fq = cert.sigma0_at(fq, prec)
    grid_sup = max(abs(cert.sigma0_at(k, prec)) for k in range(n + 1))
    if abs(v_fq) <= (grid_sup + 1) * tol:
        r = HPFloat(Fraction(fq), prec)
    else:
        r, ok = _bisect_root(cert, Fraction(fq), inst.q, prec)
        if not ok:
            raise PrecisionEscalationNeeded("no sign change found for the extra root")

    poly = cert.sigma0.to_hpfloat(cert.precision_bits)
    multiplicities: dict[int, int] = {}
    for j in range(cq, n + 1):
        quot, rem = _deflate_once(poly, HPFloat(Fraction(j), cert.precision_bits))
        if abs(rem) > div_tol:
            raise PrecisionEscalationNeeded(f"sigma0 does not vanish at {j} to division tolerance")
        poly = quot
        mu = 0
        while poly.degree >= 2:
            q1, r1 = _deflate_once(poly, HPFloat(Fraction(j), cert.precision_bits))
            q2, r2 = _deflate_once(q1, HPFloat(Fraction(j), cert.precision_bits))
            if abs(r1) <= div_tol and abs(r2) <= div_tol:
                poly, mu = q2, mu + 1
            else:
                break
        multiplicities[j] = mu
    poly, rem = _deflate_once(poly, r.with_precision(cert.precision_bits))
    if abs(rem) > div_tol * 4:
        raise PrecisionEscalationNeeded("extra-root deflation left a large remainder")
    p = poly

    sign = -1 if (n - cq) % 2 else 1
    signed_p = p.scale(Fraction(sign))
    half_grid = [Fraction(k, 2) for k in range(2 * n + 1)]
    p_vals = [signed_p(HPFloat(x, prec)) for x in half_grid]
    if min(p_vals) <= 0:
        raise PrecisionEscalationNeeded("sign-corrected leftover factor is not positive on [0, n]")

    r_rational = r.as_fraction().limit_denominator(2**64)
    akr_k = n - fq
    akr_r = Fraction(n) - r_rational
    lo, hi = Fraction(akr_k - 1), Fraction(akr_k)
    if akr_r <= lo:
        akr_r = lo + Fraction(1, 2**64)
    if akr_r > hi:
        akr_r = hi
    _, _, akr_equal = akr_polynomial(akr_k, akr_r)

    lift = lift_nonneg(signed_p, n, tol=tol)

    # residual of the re-multiplied factorization on the half-integer grid
    worst = HPFloat(0, prec)
    for x in half_grid:
        xv = HPFloat(x, prec)
        acc = p(xv) * (xv - r)
        for j in range(cq, n + 1):
            acc = acc * (xv - j) ** (2 * multiplicities[j] + 1)
        diff = abs(acc - cert.sigma0_at(x, prec))
        if diff > worst:
            worst = diff
    if float(worst) > tol * float(grid_sup + 1):
        raise PrecisionEscalationNeeded(
            f"re-multiplied factorization residual {float(worst):.3g} exceeds tolerance"
        )
    return SosDecomposition(
        p=p,
        r=r,
        r_rational=r_rational,
        multiplicities=multiplicities,
        akr_k=akr_k,
        akr_r=akr_r,
        akr_equal=akr_equal,
        sign=sign,
        lift=lift,
        factorization_residual=worst,
    )
