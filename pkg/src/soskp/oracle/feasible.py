"""Feasibility oracle: max-lambda_min reformulation, facial reduction, bands.

Feasible Gram pairs always sit on the PSD boundary (the identity forces
sigma-values to vanish on the Hamming level at ceil q), so the raw
feasible set has empty interior and interior-point margins would read 0
on every instance.  The forced kernel is known a priori; quotienting it
out (facial reduction) restores strict feasibility exactly when the
instance is genuinely feasible, which is what makes the margin bands
meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .hplinalg import sym_eig_min
from .ipm import BlockOps, solve_ipm
from .sdp import SdpProblem, term_float_matrix, term_float_vector

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
MARGINAL = "marginal"

DEFAULT_EPS = 1e-8
MARGINAL_SPAN = 1e3  # marginal band covers (-1e3 eps, eps)


@dataclass
class FeasibilityResult:
    status: str
    min_eigenvalue_margin: float
    witness: dict[str, np.ndarray] | None = None
    dual: list[float] | None = None
    detail: dict = field(default_factory=dict)


def _reduction_bases(problem: SdpProblem) -> list[np.ndarray | None]:
    """Orthonormal complement of the forced kernel, per block (None = full)."""
    bases: list[np.ndarray | None] = []
    for bi, blk in enumerate(problem.blocks):
        kers = problem.forced_kernels.get(bi)
        if not kers:
            bases.append(None)
            continue
        K = np.array([[float(x) for x in v] for v in kers], dtype=float)
        B = null_space(K)
        bases.append(B if B.shape[1] > 0 else np.zeros((blk.dim, 0)))
    return bases


DROP_TOL = 1e-11


def _normalized_rows(problem: SdpProblem, bases):
    """Float64 constraint operators on the reduced blocks, row-normalized.

    Rows whose reduced coefficients vanish (the facially eliminated
    constraints) are dropped when their right-hand side also vanishes and
    flagged as affine inconsistencies otherwise.  Returns
    (ops, b, norms, dims, kept, inconsistent_row).
    """
    nb = len(problem.blocks)
    m = len(problem.constraints)
    dims = []
    for bi, blk in enumerate(problem.blocks):
        B = bases[bi]
        dims.append(blk.dim if B is None else B.shape[1])
    V = [np.zeros((dims[bi], m)) for bi in range(nb)]
    c = [np.zeros(m) for _ in range(nb)]
    dense: list[dict[int, np.ndarray]] = [dict() for _ in range(nb)]
    b = np.zeros(m)
    for i, con in enumerate(problem.constraints):
        b[i] = float(con.rhs)
        for t in con.terms:
            B = bases[t.block]
            if dims[t.block] == 0:
                continue
            if t.vector is not None and i not in dense[t.block]:
                v = term_float_vector(t)
                if B is not None:
                    v = B.T @ v
                if c[t.block][i] != 0.0 or np.any(V[t.block][:, i]):
                    # second rank-one term on the same block: densify
                    D = dense[t.block].setdefault(i, np.zeros((dims[t.block], dims[t.block])))
                    dense[t.block][i] = D + float(t.scale) * np.outer(v, v)
                else:
                    V[t.block][:, i] = v
                    c[t.block][i] = float(t.scale)
            else:
                D = term_float_matrix(t, problem.blocks[t.block].dim)
                if B is not None:
                    D = B.T @ D @ B
                acc = dense[t.block].get(i)
                dense[t.block][i] = D if acc is None else acc + D

    b_scale = max(1.0, float(np.max(np.abs(b))) if m else 0.0)
    coeff = np.zeros(m)
    for i in range(m):
        mx = 0.0
        for bi in range(nb):
            if c[bi][i] != 0.0:
                mx = max(mx, abs(c[bi][i]) * float(V[bi][:, i] @ V[bi][:, i]))
            if i in dense[bi]:
                mx = max(mx, float(np.max(np.abs(dense[bi][i]))))
        coeff[i] = mx

    inconsistent_row = None
    kept = []
    for i in range(m):
        if coeff[i] <= DROP_TOL:
            if abs(b[i]) > DROP_TOL * b_scale:
                inconsistent_row = i
            continue
        kept.append(i)

    norms = np.array([max(coeff[i], abs(b[i])) for i in kept]) if kept else np.zeros(0)
    bk = np.array([b[i] for i in kept]) / norms if kept else np.zeros(0)
    Vk = [V[bi][:, kept] for bi in range(nb)]
    ck = [c[bi][kept] / norms if kept else np.zeros(0) for bi in range(nb)]
    densek: list[dict[int, np.ndarray]] = [dict() for _ in range(nb)]
    for bi in range(nb):
        for pos, i in enumerate(kept):
            if i in dense[bi]:
                densek[bi][pos] = dense[bi][i] / norms[pos]
    ops = [BlockOps(dims[bi], Vk[bi], ck[bi], densek[bi]) for bi in range(nb)]
    return ops, bk, norms, dims, kept, inconsistent_row


@dataclass
class MaxLminSolution:
    """Raw outcome of the max-lambda_min solve on the reduced problem."""

    t_star: float
    witness_raw: dict[str, np.ndarray]  # X = Y + t I, lifted to full coordinates
    witness_reduced: list[np.ndarray | None]  # per block, reduced coordinates
    dual: np.ndarray  # lambda in original constraint units
    bases: list[np.ndarray | None]
    reduced_dims: list[int]
    detail: dict


def solve_max_lmin(problem: SdpProblem, effort: int = 0) -> MaxLminSolution:
    """max t s.t. A(Y) + t A(I) = b, Y >= 0 (t free, capped) on reduced blocks."""
    problem.validate()
    bases = _reduction_bases(problem)
    ops, b, norms, dims, kept, bad_row = _normalized_rows(problem, bases)
    m_full = len(problem.constraints)
    m = len(kept)
    live = [bi for bi in range(len(dims)) if dims[bi] > 0]

    if bad_row is not None:
        # the reduced affine system is outright inconsistent: a constraint
        # with (numerically) zero gradient and nonzero right-hand side
        lam = np.zeros(m_full)
        lam[bad_row] = -np.sign(float(problem.constraints[bad_row].rhs))
        wit = {blk.name: np.zeros((blk.dim, blk.dim)) for blk in problem.blocks}
        return MaxLminSolution(
            t_star=-float("inf"),
            witness_raw=wit,
            witness_reduced=[None] * len(dims),
            dual=lam,
            bases=bases,
            reduced_dims=dims,
            detail={
                "affine_inconsistent_row": bad_row,
                "label": problem.constraints[bad_row].label,
                "ipm_status": "inconsistent",
                "pinfeas": float("inf"),
            },
        )

    if not live or m == 0:
        resid = float(np.max(np.abs(b))) if m else 0.0
        wit = {blk.name: np.zeros((blk.dim, blk.dim)) for blk in problem.blocks}
        return MaxLminSolution(
            t_star=-resid if resid > 0 else 0.0,
            witness_raw=wit,
            witness_reduced=[None] * len(dims),
            dual=np.zeros(m_full),
            bases=bases,
            reduced_dims=dims,
            detail={"empty": True, "pinfeas": resid},
        )

    # joint affine inconsistency (beyond single trivial rows): the reduced
    # equality system may have no solution at all once the forced face is
    # quotiented out; the out-of-range component of b is then a separating
    # functional with sum_i lam_i A_i = 0.
    a0_pre = np.zeros(m)
    for bi in live:
        op = ops[bi]
        a0_pre += op.c * np.einsum("ij,ij->j", op.V, op.V)
        for i, D in op.dense.items():
            a0_pre[i] += float(np.trace(D))
    G = _constraint_gram(ops, live, a0_pre, m)
    w, U = np.linalg.eigh(G)
    cutoff = max(w[-1], 1.0) * 1e-12
    inv = np.where(w > cutoff, 1.0 / np.maximum(w, cutoff), 0.0)
    z = U @ (inv * (U.T @ b))
    rho = b - G @ z
    if float(np.max(np.abs(rho))) > 1e-9 * (1.0 + float(np.max(np.abs(b)))):
        lam_kept = -rho / norms
        lam = np.zeros(m_full)
        for pos, i in enumerate(kept):
            lam[i] = lam_kept[pos]
        wit = {blk.name: np.zeros((blk.dim, blk.dim)) for blk in problem.blocks}
        return MaxLminSolution(
            t_star=-float("inf"),
            witness_raw=wit,
            witness_reduced=[None] * len(dims),
            dual=lam,
            bases=bases,
            reduced_dims=dims,
            detail={
                "affine_inconsistent": True,
                "residual": float(np.max(np.abs(rho))),
                "ipm_status": "inconsistent",
                "pinfeas": float("inf"),
            },
        )

    # extended problem: Y blocks + t_plus, t_minus, cap slack.  The cap
    # only needs to exceed eps for feasibility detection; a binding cap
    # still reads Feasible (with an understated margin), so keep it small
    # enough not to unbalance the row scaling.
    a0 = a0_pre
    t_cap = 10.0 * (1.0 + (float(np.max(np.abs(b))) if m else 0.0))

    m_ext = m + 1
    ext_dims = [dims[bi] for bi in live] + [1, 1, 1]
    ext_ops = []
    for bi in live:
        op = ops[bi]
        Vp = np.zeros((dims[bi], m_ext))
        Vp[:, :m] = op.V
        cp = np.zeros(m_ext)
        cp[:m] = op.c
        ext_ops.append(BlockOps(dims[bi], Vp, cp, dict(op.dense)))
    ones = np.ones((1, m_ext))

    def scalar_ops(coeffs: np.ndarray) -> BlockOps:
        return BlockOps(1, ones.copy(), coeffs, {})

    ctp = np.zeros(m_ext)
    ctp[:m] = a0
    ctp[m] = 1.0
    ctm = np.zeros(m_ext)
    ctm[:m] = -a0
    ctm[m] = -1.0
    ccap = np.zeros(m_ext)
    ccap[m] = 1.0
    ext_ops += [scalar_ops(ctp), scalar_ops(ctm), scalar_ops(ccap)]
    b_ext = np.concatenate([b, [t_cap]])
    C = [np.zeros((d, d)) for d in ext_dims]
    C[-3][0, 0] = -1.0
    C[-2][0, 0] = 1.0

    max_iter = 100 if effort == 0 else 300
    tol = 1e-11 if effort == 0 else 3e-13
    tau = 0.99 if effort == 0 else 0.95
    init = 1.0 if effort == 0 else 100.0
    res = solve_ipm(
        ext_dims, C, ext_ops, b_ext, max_iter=max_iter, tol_feas=tol, tol_gap=tol,
        tau=tau, init_scale=init,
    )

    t_star = res.X[-3][0, 0] - res.X[-2][0, 0]
    witness_raw = {}
    witness_reduced: list[np.ndarray | None] = [None] * len(dims)
    for k, bi in enumerate(live):
        Xred = res.X[k] + t_star * np.eye(dims[bi])
        witness_reduced[bi] = Xred
        B = bases[bi]
        witness_raw[problem.blocks[bi].name] = Xred if B is None else B @ Xred @ B.T
    for bi in range(len(problem.blocks)):
        if bi not in live:
            dd = problem.blocks[bi].dim
            witness_raw[problem.blocks[bi].name] = np.zeros((dd, dd))
    detail = {
        "ipm_status": res.status,
        "t_star": t_star,
        "iterations": res.iterations,
        "rel_gap": res.rel_gap,
        "pinfeas": res.pinfeas,
        "dinfeas": res.dinfeas,
        "reduced_dims": dims,
        "kept_rows": m,
    }
    dual_full = np.zeros(m_full)
    if m:
        dual_kept = -res.y[:m] / norms
        for pos, i in enumerate(kept):
            dual_full[i] = dual_kept[pos]
    return MaxLminSolution(
        t_star=t_star,
        witness_raw=witness_raw,
        witness_reduced=witness_reduced,
        dual=dual_full,
        bases=bases,
        reduced_dims=dims,
        detail=detail,
    )


def sdp_feasible(
    problem: SdpProblem,
    eps: float = DEFAULT_EPS,
    effort: int = 0,
    hp_prec: int = 192,
) -> FeasibilityResult:
    """Decide feasibility with margin bands.

    Status: Feasible when the certified margin is >= eps, Infeasible when
    t* <= -1e3 eps with a validated separating functional, Marginal in
    between (including solver stalls and iteration limits).
    """
    sol = solve_max_lmin(problem, effort)
    detail = sol.detail
    t_star = sol.t_star
    if detail.get("empty"):
        if t_star >= -eps:
            return FeasibilityResult(FEASIBLE, 0.0, witness=sol.witness_raw, detail=detail)
        return FeasibilityResult(INFEASIBLE, t_star, detail=detail)
    m = len(problem.constraints)
    if not np.isfinite(t_star):
        t_star = -1e30

    if t_star >= eps:
        # the witness is judged on its own: least-squares corrected onto
        # the affine space, then a high-precision eigenvalue bound,
        # independent of how the interior-point iteration terminated
        residual = _correct_witness(problem, sol, eps)
        margin = None
        for Xred in sol.witness_reduced:
            if Xred is None:
                continue
            lam = float(sym_eig_min(Xred, hp_prec))
            margin = lam if margin is None else min(margin, lam)
        detail["witness_residual"] = residual
        if margin is not None and margin >= eps and residual <= 10 * eps:
            return FeasibilityResult(FEASIBLE, margin, witness=sol.witness_raw, detail=detail)
        detail["hp_margin"] = margin
        return FeasibilityResult(
            MARGINAL, margin if margin is not None else t_star, witness=sol.witness_raw, detail=detail
        )

    # below eps: infeasibility is decided by a validated separating
    # functional, which is scale-free (the raw t* band depends on the
    # Gram basis normalization and can disagree between formulations)
    lam = sol.dual
    lam_norm = float(np.max(np.abs(lam))) if lam.size else 0.0
    if lam_norm > 0:
        lam_hat = lam / lam_norm
        M_blocks = _farkas_matrix(problem, sol.bases, lam_hat)
        m_scale = 1.0 + max(
            (float(np.max(np.abs(Mb))) for Mb in M_blocks if Mb.size), default=0.0
        )
        lam_min = min(
            (float(sym_eig_min(Mb, hp_prec)) for Mb in M_blocks if Mb.shape[0] > 0),
            default=0.0,
        )
        b_scale = 1.0 + max((abs(float(c.rhs)) for c in problem.constraints), default=0.0)
        b_lam = float(sum(float(problem.constraints[i].rhs) * lam_hat[i] for i in range(m)))
        separation = -b_lam / b_scale
        detail["farkas_lambda_min"] = lam_min
        detail["farkas_separation"] = separation
        # a PSD defect far below the separation cannot rescue feasibility
        # unless a witness had trace ~ separation/defect, orders beyond
        # anything the instances produce
        psd_floor = -max(1e-9 * m_scale, 1e-5 * separation)
        if lam_min >= psd_floor and separation >= 1e-9:
            return FeasibilityResult(INFEASIBLE, t_star, dual=list(lam), detail=detail)
        return FeasibilityResult(MARGINAL, t_star, dual=list(lam), detail=detail)

    return FeasibilityResult(MARGINAL, t_star, detail=detail)


def _correct_witness(problem: SdpProblem, sol: MaxLminSolution, eps: float) -> float:
    """Minimum-norm correction of the reduced witness onto A(X) = b.

    Updates sol.witness_reduced and sol.witness_raw in place; returns the
    relative residual after correction.  The correction magnitude is of
    the order of the solver's final primal infeasibility, far below the
    eigenvalue margins that matter, and the margin is re-certified at
    high precision afterwards either way.
    """
    cons = problem.constraints
    m = len(cons)
    mats: list[list[np.ndarray | None]] = [[None] * len(problem.blocks) for _ in range(m)]
    for i, con in enumerate(cons):
        for t in con.terms:
            B = sol.bases[t.block]
            if sol.witness_reduced[t.block] is None:
                continue
            D = term_float_matrix(t, problem.blocks[t.block].dim)
            if B is not None:
                D = B.T @ D @ B
            acc = mats[i][t.block]
            mats[i][t.block] = D if acc is None else acc + D

    def apply_A():
        vals = np.zeros(m)
        for i in range(m):
            for bi, D in enumerate(mats[i]):
                if D is not None:
                    vals[i] += float(np.tensordot(D, sol.witness_reduced[bi]))
        return vals

    b = np.array([float(c.rhs) for c in cons])
    scale = 1.0 + float(np.max(np.abs(b))) if m else 1.0
    r = b - apply_A()
    G = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1):
            s = 0.0
            for bi in range(len(problem.blocks)):
                if mats[i][bi] is not None and mats[j][bi] is not None:
                    s += float(np.tensordot(mats[i][bi], mats[j][bi]))
            G[i, j] = G[j, i] = s
    w, U = np.linalg.eigh(G)
    cutoff = max(w[-1], 1.0) * 1e-13
    inv = np.where(w > cutoff, 1.0 / np.maximum(w, cutoff), 0.0)
    for _ in range(2):
        lam = U @ (inv * (U.T @ r))
        for bi in range(len(problem.blocks)):
            upd = None
            for i in range(m):
                if mats[i][bi] is not None and lam[i] != 0.0:
                    upd = (0 if upd is None else upd) + lam[i] * mats[i][bi]
            if upd is not None:
                sol.witness_reduced[bi] = sol.witness_reduced[bi] + upd
        r = b - apply_A()
    for bi, blk in enumerate(problem.blocks):
        if sol.witness_reduced[bi] is None:
            continue
        B = sol.bases[bi]
        Xr = sol.witness_reduced[bi]
        sol.witness_raw[blk.name] = Xr if B is None else B @ Xr @ B.T
    return float(np.max(np.abs(r))) / scale


def _constraint_gram(ops, live, a0: np.ndarray, m: int) -> np.ndarray:
    """Gram matrix of the (reduced) constraint gradients, t column included."""
    G = np.outer(a0, a0)
    for bi in live:
        op = ops[bi]
        if op.has_dense:
            from .ipm import _dense_bank

            bank = _dense_bank(op, m)
            for i in range(m):
                for j in range(m):
                    G[i, j] += float(np.tensordot(bank[i], bank[j]))
        else:
            P = op.V.T @ op.V
            G += np.outer(op.c, op.c) * (P * P)
    return 0.5 * (G + G.T)


def _farkas_matrix(problem: SdpProblem, bases, lam: np.ndarray) -> list[np.ndarray]:
    """sum_i lam_i A_i on each reduced block (the separating functional)."""
    out = []
    for bi, blk in enumerate(problem.blocks):
        B = bases[bi]
        dim = blk.dim if B is None else B.shape[1]
        M = np.zeros((dim, dim))
        for i, con in enumerate(problem.constraints):
            if lam[i] == 0.0:
                continue
            for t in con.terms:
                if t.block != bi:
                    continue
                D = term_float_matrix(t, blk.dim)
                if B is not None:
                    D = B.T @ D @ B
                M += lam[i] * D
        out.append(M)
    return out


def verify_witness(problem: SdpProblem, witness: dict[str, np.ndarray], eps: float, hp_prec: int = 192) -> dict:
    """Re-verify a feasibility witness against the exact constraint data.

    Returns max constraint residual (relative) and min block eigenvalue;
    a valid witness has residual <= 10 eps and eigenvalues >= -eps.
    """
    worst = 0.0
    for con in problem.constraints:
        val = 0.0
        scale = max(1.0, abs(float(con.rhs)))
        for t in con.terms:
            X = witness[problem.blocks[t.block].name]
            D = term_float_matrix(t, problem.blocks[t.block].dim)
            val += float(np.tensordot(D, X))
            scale = max(scale, float(np.max(np.abs(D))) * float(np.max(np.abs(X))))
        worst = max(worst, abs(val - float(con.rhs)) / scale)
    min_eig = min(
        (float(sym_eig_min(X, hp_prec)) for X in witness.values() if X.shape[0] > 0),
        default=0.0,
    )
    return {
        "max_rel_residual": worst,
        "min_block_eigenvalue": min_eig,
        "ok": worst <= 10 * eps and min_eig >= -eps,
    }
