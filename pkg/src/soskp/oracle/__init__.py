"""Exact SOS-rank oracle: Gram feasibility programs and their solver."""

from .assemble import DENSE_GUARD_N, assemble_dense, assemble_symmetric
from .feasible import (
    DEFAULT_EPS,
    FEASIBLE,
    INFEASIBLE,
    MARGINAL,
    FeasibilityResult,
    sdp_feasible,
    solve_max_lmin,
    verify_witness,
)
from .lift import LiftResult, lift_nonneg
from .rank import CONVENTION, DENSE, SYMMETRIC, RankResult, scan_statuses, sos_rank
from .sdp import Block, Constraint, SdpProblem, Term

__all__ = [
    "assemble_dense",
    "assemble_symmetric",
    "DENSE_GUARD_N",
    "sdp_feasible",
    "solve_max_lmin",
    "verify_witness",
    "FeasibilityResult",
    "FEASIBLE",
    "INFEASIBLE",
    "MARGINAL",
    "DEFAULT_EPS",
    "lift_nonneg",
    "LiftResult",
    "sos_rank",
    "scan_statuses",
    "RankResult",
    "DENSE",
    "SYMMETRIC",
    "CONVENTION",
    "Block",
    "Constraint",
    "Term",
    "SdpProblem",
]
