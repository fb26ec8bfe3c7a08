"""Sign classification of a polynomial on the integer grid {0..n}."""

from __future__ import annotations

from dataclasses import dataclass

from .hpfloat import HPFloat
from .unipoly import UniPoly


@dataclass(frozen=True)
class SignProfile:
    """Per-integer signs in {-1, 0, +1} and the count of sign changes.

    A value is classified 0 when |p(k)| <= tol * (1 + sup_k |p(k)|); the
    threshold is relative to the grid sup-norm because certificate values
    mix wildly different magnitudes.
    """

    signs: tuple[int, ...]
    sign_changes: int

    def symbol(self) -> str:
        return "".join({-1: "-", 0: "0", 1: "+"}[s] for s in self.signs)


def profile_from_values(values: list[HPFloat], tol: HPFloat) -> SignProfile:
    sup = max((abs(v) for v in values), default=HPFloat(0, tol.prec))
    thresh = tol * (1 + sup)
    signs = []
    for v in values:
        if abs(v) <= thresh:
            signs.append(0)
        elif v > 0:
            signs.append(1)
        else:
            signs.append(-1)
    changes = 0
    prev = None
    for s in signs:
        if s == 0:
            continue
        if prev is not None and s != prev:
            changes += 1
        prev = s
    return SignProfile(tuple(signs), changes)


def integer_sign_profile(p: UniPoly, n: int, tol: HPFloat) -> SignProfile:
    """Classify p at 0..n; Horner evaluation on the stored coefficients."""
    if n < 1:
        raise ValueError("n must be positive")
    values = [_as_hp(p(k), tol.prec) for k in range(n + 1)]
    return profile_from_values(values, tol)


def _as_hp(v, prec: int) -> HPFloat:
    return v if isinstance(v, HPFloat) else HPFloat(v, prec)
