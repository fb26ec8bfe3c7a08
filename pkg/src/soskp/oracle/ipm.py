"""Dense primal-dual interior-point method for small block-diagonal SDPs.

Standard form:  min <C, X>  s.t.  <A_i, X> = b_i,  X >= 0 (block diagonal).
NT scaling, Mehrotra-style adaptive centering, infeasible start.  Pure
float64 numpy, deterministic given inputs; high-precision validation of
the final iterate happens outside this module.

Constraint operators are held per block as a bank of rank-one terms
(columns V, scales c) plus optional dense matrices, which keeps the
Schur complement assembly at two small matmuls per block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BlockOps:
    """Constraint action on one block: sum_i y_i (c_i v_i v_i^T + D_i)."""

    dim: int
    V: np.ndarray  # (dim, m) rank-one vectors, zero column = absent
    c: np.ndarray  # (m,)
    dense: dict[int, np.ndarray]  # constraint index -> dense sym matrix

    @property
    def has_dense(self) -> bool:
        return bool(self.dense)


@dataclass
class IpmResult:
    status: str  # "optimal" | "iteration_limit" | "numerical"
    obj_primal: float
    obj_dual: float
    X: list[np.ndarray]
    y: np.ndarray
    S: list[np.ndarray]
    iterations: int
    rel_gap: float
    pinfeas: float
    dinfeas: float


def _sym(M):
    return 0.5 * (M + M.T)


def _apply_A(ops: list[BlockOps], X: list[np.ndarray]) -> np.ndarray:
    m = ops[0].V.shape[1]
    out = np.zeros(m)
    for b, op in enumerate(ops):
        Xb = X[b]
        out += op.c * np.einsum("ji,jk,ki->i", op.V, Xb, op.V, optimize=True)
        for i, D in op.dense.items():
            out[i] += float(np.tensordot(D, Xb))
    return out


def _apply_At(ops: list[BlockOps], y: np.ndarray) -> list[np.ndarray]:
    out = []
    for op in ops:
        M = (op.V * (op.c * y)) @ op.V.T
        for i, D in op.dense.items():
            M = M + y[i] * D
        out.append(_sym(M))
    return out


def _dense_bank(op: BlockOps, m: int) -> list[np.ndarray]:
    """All constraint matrices on this block, densified (small blocks only)."""
    bank = []
    for i in range(m):
        M = op.c[i] * np.outer(op.V[:, i], op.V[:, i])
        if i in op.dense:
            M = M + op.dense[i]
        bank.append(M)
    return bank


def _schur(ops: list[BlockOps], W: list[np.ndarray], m: int) -> np.ndarray:
    H = np.zeros((m, m))
    for b, op in enumerate(ops):
        Wb = W[b]
        if op.has_dense:
            bank = _dense_bank(op, m)
            WAW = [Wb @ M @ Wb for M in bank]
            for i in range(m):
                Hi = np.array([np.tensordot(bank[i], WAW[j]) for j in range(m)])
                H[i, :] += Hi
        else:
            P = op.V.T @ Wb @ op.V
            H += np.outer(op.c, op.c) * (P * P)
    return _sym(H)


def _nt_scaling(X: np.ndarray, S: np.ndarray) -> np.ndarray:
    """W with W S W = X (geometric mean of X and S^{-1})."""
    Ls = np.linalg.cholesky(S)
    M = _sym(Ls.T @ X @ Ls)
    w, U = np.linalg.eigh(M)
    w = np.maximum(w, 1e-300)
    Msqrt = (U * np.sqrt(w)) @ U.T
    Linv = np.linalg.inv(Ls)
    return _sym(Linv.T @ Msqrt @ Linv)


def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    """Largest alpha with X + alpha dX >= 0 (via Cholesky of X)."""
    if not np.isfinite(dX).all() or not np.isfinite(X).all():
        return 1e-12
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        w, U = np.linalg.eigh(_sym(X))
        L = U * np.sqrt(np.maximum(w, 1e-300))
    Linv = np.linalg.inv(L)
    M = _sym(Linv @ dX @ Linv.T)
    if not np.isfinite(M).all():
        return 1e-12
    try:
        lam = np.linalg.eigvalsh(M)[0]
    except np.linalg.LinAlgError:
        return 1e-12
    if not np.isfinite(lam) or lam >= -1e-300:
        return np.inf if np.isfinite(lam) else 1e-12
    return -1.0 / lam


def _chol_solve(H: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    jitter = 1e-13 * (np.trace(H) / max(1, H.shape[0]) + 1.0)
    for _ in range(8):
        try:
            L = np.linalg.cholesky(H + jitter * np.eye(H.shape[0]))
            z = np.linalg.solve(L, rhs)
            return np.linalg.solve(L.T, z)
        except np.linalg.LinAlgError:
            jitter *= 100
    return None


def solve_ipm(
    dims: list[int],
    C: list[np.ndarray],
    ops: list[BlockOps],
    b: np.ndarray,
    max_iter: int = 100,
    tol_feas: float = 1e-11,
    tol_gap: float = 1e-11,
    tau: float = 0.99,
    init_scale: float = 1.0,
) -> IpmResult:
    m = len(b)
    nu = sum(dims)
    scale0 = init_scale * max(1.0, float(np.max(np.abs(b))))
    X = [scale0 * np.eye(d) for d in dims]
    S = [scale0 * np.eye(d) for d in dims]
    y = np.zeros(m)

    best = None
    status = "iteration_limit"
    it = 0
    errstate = np.errstate(over="ignore", invalid="ignore", divide="ignore")
    errstate.__enter__()
    for it in range(1, max_iter + 1):
        Rp = b - _apply_A(ops, X)
        AtY = _apply_At(ops, y)
        Rd = [C[bi] - S[bi] - AtY[bi] for bi in range(len(dims))]
        mu = sum(float(np.tensordot(X[bi], S[bi])) for bi in range(len(dims))) / nu
        obj_p = sum(float(np.tensordot(C[bi], X[bi])) for bi in range(len(dims)))
        obj_d = float(b @ y)
        pinf = float(np.max(np.abs(Rp))) / (1 + float(np.max(np.abs(b))))
        dinf = max(float(np.max(np.abs(R))) for R in Rd) / (1 + max(float(np.max(np.abs(Cb))) for Cb in C))
        gap = abs(obj_p - obj_d) / (1 + abs(obj_p) + abs(obj_d))

        snapshot = (pinf + dinf + gap, obj_p, obj_d, [x.copy() for x in X], y.copy(), [s.copy() for s in S], it, gap, pinf, dinf)
        if best is None or snapshot[0] < best[0]:
            best = snapshot
        if pinf <= tol_feas and dinf <= tol_feas and gap <= tol_gap:
            status = "optimal"
            break
        if mu <= 0 or not np.isfinite(mu):
            status = "stalled"
            break

        try:
            W = [_nt_scaling(X[bi], S[bi]) for bi in range(len(dims))]
            H = _schur(ops, W, m)
        except np.linalg.LinAlgError:
            status = "numerical"
            break

        def solve_direction(Rc: list[np.ndarray]):
            # H dy = Rp - A(Rc) + A(W Rd W)
            WRdW = [W[bi] @ Rd[bi] @ W[bi] for bi in range(len(dims))]
            rhs = Rp - _apply_A(ops, Rc) + _apply_A(ops, WRdW)
            dy = _chol_solve(H, rhs)
            if dy is None:
                return None
            AtDy = _apply_At(ops, dy)
            dS = [Rd[bi] - AtDy[bi] for bi in range(len(dims))]
            dX = [_sym(Rc[bi] - W[bi] @ dS[bi] @ W[bi]) for bi in range(len(dims))]
            return dX, dy, dS

        # predictor
        Rc_aff = [-X[bi] for bi in range(len(dims))]
        aff = solve_direction(Rc_aff)
        if aff is None:
            status = "numerical"
            break
        dXa, dya, dSa = aff
        ap = min((_max_step(X[bi], dXa[bi]) for bi in range(len(dims))), default=np.inf)
        ad = min((_max_step(S[bi], dSa[bi]) for bi in range(len(dims))), default=np.inf)
        ap, ad = min(1.0, tau * ap), min(1.0, tau * ad)
        mu_aff = sum(
            float(np.tensordot(X[bi] + ap * dXa[bi], S[bi] + ad * dSa[bi]))
            for bi in range(len(dims))
        ) / nu
        sigma = min(1.0, max(1e-8, (max(mu_aff, 0.0) / mu) ** 3))

        # corrector: centering plus the Mehrotra second-order term
        try:
            Sinv = [np.linalg.inv(S[bi]) for bi in range(len(dims))]
        except np.linalg.LinAlgError:
            status = "numerical"
            break
        Rc = [
            sigma * mu * Sinv[bi] - X[bi] - _sym(dXa[bi] @ dSa[bi] @ Sinv[bi])
            for bi in range(len(dims))
        ]
        step = solve_direction(Rc)
        if step is None:
            status = "numerical"
            break
        dX, dy, dS = step
        ap = min((_max_step(X[bi], dX[bi]) for bi in range(len(dims))), default=np.inf)
        ad = min((_max_step(S[bi], dS[bi]) for bi in range(len(dims))), default=np.inf)
        ap, ad = min(1.0, tau * ap), min(1.0, tau * ad)
        if ap < 1e-10 and ad < 1e-10:
            status = "stalled"
            break
        X = [_sym(X[bi] + ap * dX[bi]) for bi in range(len(dims))]
        S = [_sym(S[bi] + ad * dS[bi]) for bi in range(len(dims))]
        y = y + ad * dy
        if not all(np.isfinite(x).all() for x in X) or not np.isfinite(y).all():
            status = "numerical"
            break
    errstate.__exit__(None, None, None)

    _, obj_p, obj_d, Xb, yb, Sb, itb, gap, pinf, dinf = best
    return IpmResult(status, obj_p, obj_d, Xb, yb, Sb, it, gap, pinf, dinf)
