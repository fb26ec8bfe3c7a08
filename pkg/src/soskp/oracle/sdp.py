"""Block-diagonal semidefinite feasibility problems with exact constraint data.

Constraints are linear functionals over symmetric Gram blocks.  Each term
is either rank-one (scale * v v^T with an exact rational vector) or a
dense rational matrix.  Exact data lets the final high-precision
validation rebuild the constraints independently of the float64 solver
path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class Block:
    name: str
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("block dimension must be >= 1")


@dataclass(frozen=True)
class Term:
    """scale * v v^T (rank-one) or scale * matrix (dense) on one block."""

    block: int
    scale: Fraction
    vector: tuple[Fraction, ...] | None = None
    matrix: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.matrix is None):
            raise ValueError("exactly one of vector/matrix must be given")


@dataclass(frozen=True)
class Constraint:
    terms: tuple[Term, ...]
    rhs: Fraction
    label: str = ""


@dataclass
class SdpProblem:
    blocks: list[Block]
    constraints: list[Constraint]
    objective: None = None  # feasibility only
    forced_kernels: dict[int, list[tuple[Fraction, ...]]] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def validate(self):
        for con in self.constraints:
            for t in con.terms:
                if not (0 <= t.block < len(self.blocks)):
                    raise ValueError(f"constraint {con.label!r} references unknown block {t.block}")
                dim = self.blocks[t.block].dim
                if t.vector is not None and len(t.vector) != dim:
                    raise ValueError(f"vector length mismatch in {con.label!r}")
                if t.matrix is not None and len(t.matrix) != dim:
                    raise ValueError(f"matrix size mismatch in {con.label!r}")
        return self


def term_float_vector(t: Term) -> np.ndarray | None:
    if t.vector is None:
        return None
    return np.array([float(v) for v in t.vector], dtype=float)


def term_float_matrix(t: Term, dim: int) -> np.ndarray:
    """Dense float64 matrix of the term (rank-one terms expanded)."""
    if t.matrix is not None:
        return float(t.scale) * np.array([[float(x) for x in row] for row in t.matrix])
    v = term_float_vector(t)
    return float(t.scale) * np.outer(v, v)
