"""Quadrature verification of the smoothed-expectation integral bounds.

For each layer k the expectation splits into

    I_k = int_0^1 exp(-(u - c_k)^2 / (2 sigma^2)) log(1/u) du,
    J_k = int_0^1 exp(-(u - c_k)^2 / (2 sigma^2)) du,        c_k = q - k + 1,

and the proof bounds them by sigma-sized quantities on the three layers
C = {floor q, ceil q, ceil q + 1} touching the threshold and by
exp(-1/(2 sigma^2)) elsewhere.  This module recomputes both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from ..errors import RegimeError
from ..model import KnapsackInstance


@dataclass(frozen=True)
class IJRow:
    k: int
    in_C: bool
    I: float
    I_err: float
    I_bound: float
    J: float
    J_err: float
    J_bound: float
    margin: float


@dataclass(frozen=True)
class IJReport:
    sigma: float
    rows: tuple[IJRow, ...]
    all_hold: bool
    quadrature_ok: bool  # every error estimate <= 1% of the claimed bound


def _breakpoints(c: float, sigma: float) -> list[float]:
    pts = {sigma, 10 * sigma}
    for w in (1.0, 5.0):
        pts.add(c - w * sigma)
        pts.add(c + w * sigma)
    return sorted(p for p in pts if 0.0 < p < 1.0)


def _gauss(c: float, sigma: float):
    s2 = 2.0 * sigma * sigma

    def phi(u: float) -> float:
        return math.exp(-((u - c) ** 2) / s2)

    return phi


def check_IJ_inequalities(inst: KnapsackInstance, sigma: float) -> IJReport:
    """Adaptive quadrature of I_k, J_k against the proof's explicit caps."""
    if not (0 < inst.q < inst.n // 2) or inst.q_hat == 0:
        raise RegimeError("integral checks need 0 < q < floor(n/2) with non-integral q")
    if not (0.0 < sigma < 0.5):
        raise RegimeError("sigma must lie in (0, 1/2)")
    n = inst.n
    q = float(inst.q)
    C = {inst.floor_q, inst.ceil_q, inst.ceil_q + 1}
    log_inv = math.log(1.0 / sigma)
    bound_near_I = sigma * (1.0 + log_inv) + math.sqrt(2.0 * math.pi) * sigma * log_inv
    bound_near_J = sigma * math.sqrt(2.0 * math.pi)
    bound_far = math.exp(-1.0 / (2.0 * sigma * sigma))

    rows = []
    all_hold = True
    quad_ok = True
    for k in range(1, n + 1):
        c = q - k + 1
        phi = _gauss(c, sigma)
        pts = _breakpoints(c, sigma)
        I, I_err = quad(lambda u: phi(u) * math.log(1.0 / u), 0.0, 1.0, points=pts, limit=200)
        J, J_err = quad(phi, 0.0, 1.0, points=pts, limit=200)
        in_C = k in C
        I_bound = bound_near_I if in_C else bound_far
        J_bound = bound_near_J if in_C else bound_far
        margin = min(I_bound - I, J_bound - J)
        holds = I <= I_bound and J <= J_bound
        all_hold = all_hold and holds and margin > 0
        if I_err > 0.01 * I_bound or J_err > 0.01 * J_bound:
            quad_ok = False
        rows.append(IJRow(k, in_C, I, I_err, I_bound, J, J_err, J_bound, margin))
    return IJReport(sigma, tuple(rows), all_hold, quad_ok)
