"""Runtime verification of constructed certificates against the structural lemmas."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..numerics import HPFloat, SignProfile, UniPoly, profile_from_values
from ..numerics.hpfloat import default_precision
from .certificate import LOWER, Certificate
from .lower import LemmaCheck, check_lower_constraints
from .upper import f_sqrt_at

DEFAULT_TOL = 1e-12


@dataclass
class VerifyReport:
    max_identity_residual: HPFloat
    min_sigma1_on_grid: HPFloat
    min_sigma0_on_grid: HPFloat
    root_profile: SignProfile
    lemma_checks: dict[str, bool]
    passed: bool
    scale: HPFloat
    tol: float
    details: dict = field(default_factory=dict)

    def tight(self, factor: float = 10.0) -> bool:
        """True when any margin lands within `factor` of the tolerance."""
        lim = float(self.scale) * self.tol
        close_resid = float(self.max_identity_residual) >= lim / factor
        close_min = (
            min(float(self.min_sigma1_on_grid), float(self.min_sigma0_on_grid)) <= -lim / factor
        )
        return close_resid or close_min


class _GridValues:
    """sigma values at the integers, with per-point zero thresholds.

    A value is "numerically zero" relative to the size of the terms that
    formed it at that point, not the global grid sup (certificates mix
    magnitudes like 1/q_hat and 1/2 on the same grid)."""

    def __init__(self, cert: Certificate, prec: int, tol: float):
        inst = cert.inst
        self.s1, self.s0, self.local = [], [], []
        for k in range(inst.n + 1):
            s1, s0 = cert.values_at(k, prec)
            self.s1.append(s1)
            self.s0.append(s0)
            self.local.append((abs(s1) * abs(k - inst.q) + abs(k - inst.ceil_q) + 1) * tol)


def _coefficient_residual(cert: Certificate) -> HPFloat:
    """Relative coefficient-space residual of sigma0 + (x-q) sigma1 - (x - ceil q).

    Computed at doubled precision so the rounding of the stored
    coefficients is visible; scale-free (relative to the largest
    coefficient involved).  This is the tamper check that stays
    meaningful when the grid is evaluated through the closed form.
    """
    inst = cert.inst
    prec2 = 2 * cert.precision_bits
    s1 = cert.sigma1.to_hpfloat(prec2)
    s0 = cert.sigma0.to_hpfloat(prec2)
    xq = UniPoly([-inst.q, Fraction(1)], kind="hpfloat", prec=prec2)
    lin = UniPoly([Fraction(-inst.ceil_q), Fraction(1)], kind="hpfloat", prec=prec2)
    resid = s0 + xq * s1 - lin
    if resid.is_zero():
        return HPFloat(0, prec2)
    big = HPFloat(1, prec2)
    for c in list(s0.coeffs) + list(s1.coeffs):
        a = abs(HPFloat._raw(c, prec2))
        if a > big:
            big = a
    worst = max(abs(HPFloat._raw(c, prec2)) for c in resid.coeffs)
    return worst / big


def _dense_head_consistency(cert: Certificate, tol: float, prec: int) -> LemmaCheck:
    """Stored dense sigma1 matches the closed form near the head of the grid.

    Horner conditioning is benign on [0, ceil q + 1] even at capped
    precision, so this spot check works for every stored certificate and
    catches polynomial/metadata mismatches that the coefficient-identity
    residual cannot see.
    """
    inst = cert.inst
    worst = 0.0
    for k in range(0, min(inst.n, inst.ceil_q + 1) + 1):
        xv = HPFloat(Fraction(k), cert.precision_bits)
        dense = cert.sigma1(xv).with_precision(prec)
        struct = cert.sigma1_at(k, prec)
        rel = float(abs(dense - struct) / (1 + abs(struct)))
        worst = max(worst, rel)
    return LemmaCheck("dense_matches_closed_form", worst <= tol, worst, "head-window spot check")


def check_root_structure(
    cert: Certificate,
    tol: float = DEFAULT_TOL,
    prec: int | None = None,
    values: _GridValues | None = None,
) -> list[LemmaCheck]:
    """Regime-specific root-pattern checks on sigma0.

    Lower: vanishes at ceil q, positive at the other integers, one sign
    change in (floor q, q) located by bisection.  Upper: vanishes at
    ceil q .. n, nonnegative at integers [0, floor q], alternating
    midpoint signs across the integer roots (odd multiplicity), one
    extra root r in [floor q, ceil q).
    """
    prec = prec or min(cert.precision_bits, default_precision())
    inst = cert.inst
    fq, cq, n = inst.floor_q, inst.ceil_q, inst.n
    if values is None:
        values = _GridValues(cert, prec, tol)
    s0, local = values.s0, values.local
    checks: list[LemmaCheck] = []

    if cert.regime == LOWER:
        checks.append(
            LemmaCheck("sigma0_vanishes_at_ceil_q", abs(s0[cq]) <= local[cq], float(abs(s0[cq])))
        )
        ok_pos, worst = True, None
        for k in list(range(0, fq + 1)) + list(range(cq + 1, n + 1)):
            margin = s0[k] - local[k]
            if worst is None or margin < worst:
                worst = margin
            if margin <= 0:
                ok_pos = False
        checks.append(
            LemmaCheck("sigma0_positive_off_roots", ok_pos, float(worst) if worst is not None else 0.0)
        )
        r, ok = _bisect_root(cert, Fraction(fq), inst.q, prec)
        checks.append(LemmaCheck("single_root_in_fq_q", ok, float(r) if ok else 0.0, f"r={float(r)}"))
        nchanges = _local_sign_changes(cert, Fraction(fq), Fraction(cq), prec, HPFloat(tol, prec))
        checks.append(LemmaCheck("one_sign_change_between_layers", nchanges == 1, float(nchanges)))
    else:
        worst0 = max(float(abs(s0[j]) / (local[j] / tol)) for j in range(cq, n + 1))
        checks.append(LemmaCheck("sigma0_vanishes_at_int_roots", worst0 <= tol, worst0))
        ok_nn, worst = True, None
        for k in range(0, fq + 1):
            margin = s0[k] + local[k]
            if worst is None or s0[k] < worst:
                worst = s0[k]
            if margin < 0:
                ok_nn = False
        checks.append(
            LemmaCheck("sigma0_nonneg_below", ok_nn, float(worst) if worst is not None else 0.0)
        )
        alt_ok = True
        worst_mid = None
        for k in range(cq + 1, n + 1):
            mid = Fraction(2 * k - 1, 2)
            v = cert.sigma0_at(mid, prec)
            want = 1 if (k - cq - 1) % 2 == 0 else -1
            signed = v * want
            if worst_mid is None or signed < worst_mid:
                worst_mid = signed
            if signed <= 0:
                alt_ok = False
        checks.append(
            LemmaCheck(
                "odd_multiplicity_alternation",
                alt_ok,
                float(worst_mid) if worst_mid is not None else 0.0,
                "sign of sigma0 on (k-1,k) is (-1)^(k-ceil q-1)",
            )
        )
        if abs(s0[fq]) <= local[fq]:
            checks.append(LemmaCheck("extra_root_located", True, float(fq), "r = floor q"))
        else:
            r, ok = _bisect_root(cert, Fraction(fq), inst.q, prec)
            in_range = ok and fq <= r < cq
            checks.append(LemmaCheck("extra_root_located", in_range, float(r) if ok else 0.0, f"r={float(r)}"))
        if cq < n and hasattr(cert.meta, "L"):
            checks.append(_sign_alternation_fL(cert, prec))
    return checks


def _sign_alternation_fL(cert: Certificate, prec: int) -> LemmaCheck:
    """sgn(f - L) on (k-1, k) midpoints is (-1)^(k - ceil q - 1)."""
    inst = cert.inst
    L = cert.meta.L
    ok = True
    worst = None
    for k in range(inst.ceil_q + 1, inst.n + 1):
        mid = HPFloat(Fraction(2 * k - 1, 2), prec)
        diff = f_sqrt_at(inst, mid, prec) - L(mid).with_precision(prec)
        want = 1 if (k - inst.ceil_q - 1) % 2 == 0 else -1
        signed = diff * want
        if worst is None or signed < worst:
            worst = signed
        if signed <= 0:
            ok = False
    return LemmaCheck(
        "interpolant_sign_alternation", ok, float(worst) if worst is not None else 0.0,
        "f - L alternates over/under between nodes",
    )


def _bisect_root(cert: Certificate, lo: Fraction, hi: Fraction, prec: int) -> tuple[HPFloat, bool]:
    """Bisection for the sign change of sigma0 on [lo, hi]."""
    a, b = HPFloat(lo, prec), HPFloat(hi, prec)
    fa = cert.sigma0_at(a, prec)
    fb = cert.sigma0_at(b, prec)
    if fa == 0:
        return a, True
    if (fa > 0) == (fb > 0):
        return a, False
    width_target = HPFloat(2, prec) ** (-(prec // 2))
    for _ in range(prec):
        mid = (a + b) / 2
        if b - a <= width_target:
            break
        fm = cert.sigma0_at(mid, prec)
        if fm == 0:
            return mid, True
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a + b) / 2, True


def _local_sign_changes(cert: Certificate, lo: Fraction, hi: Fraction, prec: int, tol_rel: HPFloat) -> int:
    pts = 32
    vals = []
    for i in range(pts + 1):
        x = lo + (hi - lo) * Fraction(i, pts)
        vals.append(cert.sigma0_at(x, prec))
    return profile_from_values(vals, tol_rel).sign_changes


def verify_certificate(
    cert: Certificate,
    tol: float = DEFAULT_TOL,
    grid_density: int = 4,
    prec: int | None = None,
) -> VerifyReport:
    """Full verification: identity on the integer grid, nonnegativity of the
    sigma values there, and the regime's structural lemma checks."""
    prec = prec or min(cert.precision_bits, default_precision())
    inst = cert.inst
    n = inst.n
    q = inst.q

    values = _GridValues(cert, prec, tol)
    resids = [
        abs(values.s0[k] + (k - q) * values.s1[k] - (k - inst.ceil_q)) for k in range(n + 1)
    ]
    scale = max(
        max(abs(v) for v in values.s1),
        max(abs(v) for v in values.s0),
        HPFloat(1, prec),
    )
    coeff_resid = _coefficient_residual(cert)
    max_resid = max(max(resids), coeff_resid * scale)
    min_s1 = min(values.s1)
    min_s0 = min(values.s0)

    lemma_list: list[LemmaCheck] = []
    if cert.regime == LOWER:
        lemma_list.extend(check_lower_constraints(inst, cert.meta, grid_density, prec))
        lemma_list.append(_dense_head_consistency(cert, tol, prec))
    lemma_list.extend(check_root_structure(cert, tol, prec, values))
    lemma_checks = {c.name: c.passed for c in lemma_list}

    thresh = scale * tol
    prof = profile_from_values(values.s0, HPFloat(tol, prec))
    passed = (
        all(lemma_checks.values())
        and max_resid <= thresh
        and min_s1 >= -thresh
        and min_s0 >= -thresh
    )
    return VerifyReport(
        max_identity_residual=max_resid,
        min_sigma1_on_grid=min_s1,
        min_sigma0_on_grid=min_s0,
        root_profile=prof,
        lemma_checks=lemma_checks,
        passed=passed,
        scale=scale,
        tol=tol,
        details={
            "lemma_margins": {c.name: c.margin for c in lemma_list},
            "coefficient_residual": float(coeff_resid),
            "lower_grid_evaluation": "closed-form" if cert.regime == LOWER else "dense-horner",
        },
    )
