"""Smoothed-analysis experiment: expected rank bound under Gaussian q-noise.

Sampling is counter-based: sample i draws from Philox keyed by (seed,
counter=i), so parallel and serial runs agree bit for bit, and the
reduction is an indexed sum in fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..model import KnapsackInstance


def smoothed_bound_fn(q_prime: float, n: int) -> float:
    """Per-sample rank bound B(q') over all reals.

    0 outside (0, n) or at integers; the lower-layer shape for
    0 < q' < floor(n/2); n - floor(q') above.  The perturbed threshold
    ranges over all of R, hence the piecewise extension.
    """
    if not (0.0 < q_prime < n):
        return 0.0
    fl = math.floor(q_prime)
    qh = q_prime - fl
    if qh == 0.0:
        return 0.0
    if q_prime < n // 2:
        return math.sqrt(n) * math.log(2.0 / qh) + math.sqrt(n * fl) * math.log(n)
    return float(n - fl)


@dataclass(frozen=True)
class SmoothedStats:
    mean: float
    stderr: float
    samples: int
    seed: int
    sigma: float
    per_sample_bound_fn: str
    rows: tuple[tuple[int, float, float, float], ...]  # (index, eta, q', bound)


def _draw_eta(seed: int, index: int, sigma: float) -> float:
    gen = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))
    return float(gen.standard_normal()) * sigma


def run_smoothed(
    inst: KnapsackInstance,
    sigma: float,
    samples: int,
    seed: int,
    use_oracle: bool = False,
    dmax: int | None = None,
    keep_rows: bool = True,
) -> SmoothedStats:
    """Mean and stderr of B(q + eta) over deterministic Gaussian draws.

    With use_oracle (n <= 6 only) the exact oracle rank replaces B.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if not (0.0 < sigma < 1.0):
        raise ValueError("sigma must be in (0, 1)")
    if use_oracle and inst.n > 6:
        raise ValueError("oracle substitution is guarded at n <= 6")
    q = float(inst.q)
    bound_name = "oracle_rank" if use_oracle else "regime_bound_shape"

    rows = []
    values = []
    if use_oracle:
        from ..oracle import sos_rank

        for i in range(samples):
            eta = _draw_eta(seed, i, sigma)
            qp = q + eta
            res = sos_rank(
                KnapsackInstance(inst.n, Fraction(qp)), dmax if dmax is not None else inst.n
            )
            v = float(res.rank) if res.rank is not None else float("nan")
            values.append(v)
            if keep_rows:
                rows.append((i, eta, qp, v))
    else:
        for i in range(samples):
            eta = _draw_eta(seed, i, sigma)
            qp = q + eta
            v = smoothed_bound_fn(qp, inst.n)
            values.append(v)
            if keep_rows:
                rows.append((i, eta, qp, v))

    mean = math.fsum(values) / samples
    if samples > 1:
        var = math.fsum((v - mean) ** 2 for v in values) / (samples - 1)
        stderr = math.sqrt(var / samples)
    else:
        stderr = 0.0
    return SmoothedStats(mean, stderr, samples, seed, sigma, bound_name, tuple(rows))


def affine_fit_r2(xs: list[float], ys: list[float], flat_rel: float = 0.01) -> tuple[float, float, float]:
    """Least-squares affine fit -> (slope, intercept, R^2).

    R^2 is the usual centered coefficient of determination, except that
    data varying by less than flat_rel of its own magnitude across the
    sweep counts as perfectly affine (R^2 = 1): for flat data the
    centered ratio only measures noise, while the affine model's
    absolute residuals are negligible by construction.
    """
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need equally many xs and ys, at least two")
    m = len(xs)
    xbar = math.fsum(xs) / m
    ybar = math.fsum(ys) / m
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx > 0 else 0.0
    intercept = ybar - slope * xbar
    sstot = math.fsum((y - ybar) ** 2 for y in ys)
    ssres = math.fsum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    scale = math.fsum(abs(y) for y in ys) / m
    if sstot <= (flat_rel * scale) ** 2 * m:
        return slope, intercept, 1.0
    return slope, intercept, 1.0 - ssres / sstot
