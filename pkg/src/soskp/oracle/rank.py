"""Exact SOS rank at desk scale by ascending feasibility scan."""

from __future__ import annotations

from dataclasses import dataclass, field

from .._version import __version__ as _lib_version
from ..model import KnapsackInstance, format_q, trivial_rank
from .assemble import assemble_dense, assemble_symmetric
from .feasible import DEFAULT_EPS, FEASIBLE, INFEASIBLE, MARGINAL, sdp_feasible

DENSE = "dense"
SYMMETRIC = "symmetric"

# Degree convention: d bounds deg(s0) <= 2d+2 and deg(s1) <= 2d, the
# dual-side counting (one lower than the moment-side convention).
CONVENTION = "paper-dual-side"


@dataclass
class RankResult:
    inst: KnapsackInstance
    rank: int | None
    per_degree: list[tuple[int, str, float]]  # (d, status, margin)
    method: str
    unresolved: bool = False
    convention: str = CONVENTION
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "library_version": _lib_version,
            "n": self.inst.n,
            "q": format_q(self.inst.q),
            "method": self.method,
            "per_degree": [
                {"d": d, "status": s, "margin": m} for d, s, m in self.per_degree
            ],
            "rank": self.rank,
            "unresolved": self.unresolved,
            "convention": self.convention,
        }


def assemble(inst: KnapsackInstance, d: int, method: str, guard_n: int = 8):
    if method == DENSE:
        return assemble_dense(inst, d, guard_n=guard_n)
    if method == SYMMETRIC:
        return assemble_symmetric(inst, d)
    raise ValueError(f"unknown method {method!r}")


def sos_rank(
    inst: KnapsackInstance,
    dmax: int,
    method: str = SYMMETRIC,
    eps: float = DEFAULT_EPS,
    use_trivial_fast_path: bool = True,
    guard_n: int = 8,
) -> RankResult:
    """Minimal d at which the degree-d program is feasible.

    Ascending scan; the first Feasible d is the rank.  A Marginal status
    at the frontier is retried at higher solver effort and, if it
    persists, reported as unresolved rather than rounded either way.
    """
    if dmax > inst.n:
        raise ValueError(f"dmax={dmax} exceeds n={inst.n} (degree-n program is exact)")
    if use_trivial_fast_path and trivial_rank(inst) == 0:
        return RankResult(inst, 0, [], method, detail={"trivial": True})

    per_degree: list[tuple[int, str, float]] = []
    unresolved = False
    rank = None
    prev_feasible = False
    for d in range(dmax + 1):
        res = sdp_feasible(assemble(inst, d, method, guard_n), eps=eps)
        if res.status == MARGINAL:
            res = sdp_feasible(assemble(inst, d, method, guard_n), eps=eps, effort=1, hp_prec=256)
        per_degree.append((d, res.status, float(res.min_eigenvalue_margin)))
        if prev_feasible and res.status == INFEASIBLE:
            raise AssertionError(
                f"feasibility lost going to d={d} on {inst}: statuses must be monotone"
            )
        if res.status == FEASIBLE:
            prev_feasible = True
            if rank is None and not unresolved:
                rank = d
            break
        if res.status == MARGINAL:
            unresolved = True
    return RankResult(inst, rank, per_degree, method, unresolved=unresolved)


def scan_statuses(
    inst: KnapsackInstance,
    ds: list[int],
    method: str,
    eps: float = DEFAULT_EPS,
    guard_n: int = 8,
) -> list[str]:
    """Feasibility status for each requested degree (no early stop)."""
    out = []
    for d in ds:
        res = sdp_feasible(assemble(inst, d, method, guard_n), eps=eps)
        if res.status == MARGINAL:
            res = sdp_feasible(assemble(inst, d, method, guard_n), eps=eps, effort=1, hp_prec=256)
        out.append(res.status)
    return out
