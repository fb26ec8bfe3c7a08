"""Unweighted minimum-knapsack instances MK(q) and their exact optima.

MK(q): minimize the Hamming weight |x| over x in {0,1}^n subject to
|x| >= q.  Everything here is exact rational arithmetic; no floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import QParseError

INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class OptValue:
    """Either Infeasible or Value(v) with 0 <= v <= n."""

    feasible: bool
    value: int | None = None

    @classmethod
    def infeasible(cls) -> "OptValue":
        return cls(False, None)

    @classmethod
    def of(cls, v: int) -> "OptValue":
        return cls(True, v)


@dataclass(frozen=True)
class KnapsackInstance:
    n: int
    q: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not isinstance(self.q, Fraction):
            object.__setattr__(self, "q", Fraction(self.q))

    @property
    def floor_q(self) -> int:
        return math.floor(self.q)

    @property
    def ceil_q(self) -> int:
        return math.ceil(self.q)

    @property
    def q_hat(self) -> Fraction:
        return self.q - self.floor_q

    def __str__(self):
        return f"MK(n={self.n}, q={self.q})"


def optimum(inst: KnapsackInstance) -> OptValue:
    """Exact optimum: 0 for q < 0, infeasible for q > n, else ceil(q)."""
    if inst.q < 0:
        return OptValue.of(0)
    if inst.q > inst.n:
        return OptValue.infeasible()
    return OptValue.of(inst.ceil_q)


def frac_decompose(q: Fraction) -> tuple[int, Fraction]:
    """q = floor + hat with hat in [0, 1), exact."""
    q = Fraction(q)
    fl = math.floor(q)
    return fl, q - fl


def trivial_rank(inst: KnapsackInstance) -> int | None:
    """0 when q is integral or q is outside [0, n]; None otherwise."""
    if inst.q.denominator == 1:
        return 0
    if inst.q < 0 or inst.q > inst.n:
        return 0
    return None


# -- threshold literal grammar -------------------------------------------------
#
#   INT            e.g.  3, -2
#   DECIMAL        e.g.  2.25, -0.3
#   FRACTION       e.g.  9/4, -1/2
#   DYADIC         e.g.  1+2^-20, 2^-30   (k + 2^-e; k optional)
#
# The dyadic shorthand exists because thresholds like q = 1 + 2^-n must be
# representable exactly; decimal truncation would destroy the regime.

_INT_RE = re.compile(r"^[+-]?\d+$")
_DEC_RE = re.compile(r"^[+-]?\d+\.\d+$")
_FRAC_RE = re.compile(r"^([+-]?\d+)/(\d+)$")
_DYADIC_RE = re.compile(r"^(?:([+-]?\d+)\+)?2\^-(\d+)$")


def parse_q(text: str) -> Fraction:
    """Parse a threshold literal exactly; raises QParseError otherwise."""
    s = text.strip()
    if _INT_RE.match(s):
        return Fraction(int(s))
    if _DEC_RE.match(s):
        return Fraction(s)
    m = _FRAC_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise QParseError(f"zero denominator in {text!r}; {QParseError.GRAMMAR}")
        return Fraction(int(m.group(1)), den)
    m = _DYADIC_RE.match(s)
    if m:
        k = int(m.group(1)) if m.group(1) is not None else 0
        e = int(m.group(2))
        return Fraction(k) + Fraction(1, 2**e)
    raise QParseError(f"cannot parse q literal {text!r}; {QParseError.GRAMMAR}")


def format_q(q: Fraction) -> str:
    """Canonical literal for q, inverse of parse_q up to equivalence."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_INSTANCE_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s+q\s*=\s*(\S+)\s*$")


def parse_instance(text: str) -> KnapsackInstance:
    """Parse the instance text format ``n=<int> q=<rational-literal>``."""
    m = _INSTANCE_RE.match(text)
    if not m:
        raise QParseError(
            f"instance text {text!r} not of the form 'n=<int> q=<literal>'; {QParseError.GRAMMAR}"
        )
    return KnapsackInstance(int(m.group(1)), parse_q(m.group(2)))
