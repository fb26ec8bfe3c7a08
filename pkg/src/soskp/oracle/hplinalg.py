"""Small high-precision symmetric linear algebra used to validate solver output."""

from __future__ import annotations

from fractions import Fraction

import gmpy2

from ..numerics.hpfloat import HPFloat, context_for


def to_mp_matrix(M, prec: int):
    """Nested-list mpfr copy of a square matrix (numpy / Fractions / floats)."""
    n = len(M)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = M[i][j]
            if isinstance(x, Fraction):
                row.append(gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator), prec))
            elif isinstance(x, HPFloat):
                row.append(gmpy2.mpfr(x._v, prec))
            else:
                row.append(gmpy2.mpfr(float(x), prec))
        out.append(row)
    return out


def _chol_succeeds(M, shift, prec: int) -> bool:
    """Attempt Cholesky of M - shift*I at precision prec."""
    ctx = context_for(prec)
    n = len(M)
    L = [[gmpy2.mpfr(0, prec)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = ctx.sub(M[i][j], shift) if i == j else M[i][j]
            for k in range(j):
                s = ctx.sub(s, ctx.mul(L[i][k], L[j][k]))
            if i == j:
                if s <= 0:
                    return False
                L[i][j] = ctx.sqrt(s)
            else:
                L[i][j] = ctx.div(s, L[j][j])
    return True


def sym_eig_min(M, prec: int = 192, iters: int = 80) -> HPFloat:
    """Smallest eigenvalue of a symmetric matrix by Cholesky bisection.

    Brackets with Gershgorin bounds; deterministic.
    """
    A = to_mp_matrix(M, prec)
    n = len(A)
    ctx = context_for(prec)
    lo = hi = None
    for i in range(n):
        radius = gmpy2.mpfr(0, prec)
        for j in range(n):
            if j != i:
                radius = ctx.add(radius, ctx.abs(A[i][j]))
        l, h = ctx.sub(A[i][i], radius), ctx.add(A[i][i], radius)
        lo = l if lo is None or l < lo else lo
        hi = h if hi is None or h > hi else hi
    a, b = lo, hi
    for _ in range(iters):
        mid = ctx.div(ctx.add(a, b), 2)
        if _chol_succeeds(A, mid, prec):
            a = mid  # lambda_min > mid
        else:
            b = mid
    return HPFloat._raw(a, prec)


def residual_fix(A_rows, b, x, prec: int = 192):
    """Minimum-norm correction x += A^T (A A^T)^{-1} (b - A x) at high precision.

    A_rows: list of mpfr row vectors (flattened constraint gradients);
    x: flat mpfr vector.  Returns the corrected vector and the new residual
    infinity norm.  Small systems only (m x m dense solve).
    """
    ctx = context_for(prec)
    m = len(A_rows)
    nvar = len(x)
    r = []
    for i in range(m):
        s = gmpy2.mpfr(b[i], prec)
        row = A_rows[i]
        for j in range(nvar):
            s = ctx.sub(s, ctx.mul(row[j], x[j]))
        r.append(s)
    G = [[gmpy2.mpfr(0, prec)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1):
            s = gmpy2.mpfr(0, prec)
            for k in range(nvar):
                s = ctx.add(s, ctx.mul(A_rows[i][k], A_rows[j][k]))
            G[i][j] = G[j][i] = s
    lam = _solve_spd(G, r, prec)
    if lam is None:
        return x, max(ctx.abs(v) for v in r)
    out = list(x)
    for i in range(m):
        li = lam[i]
        row = A_rows[i]
        for j in range(nvar):
            out[j] = ctx.add(out[j], ctx.mul(li, row[j]))
    new_r = []
    for i in range(m):
        s = gmpy2.mpfr(b[i], prec)
        row = A_rows[i]
        for j in range(nvar):
            s = ctx.sub(s, ctx.mul(row[j], out[j]))
        new_r.append(ctx.abs(s))
    return out, max(new_r)


def _solve_spd(G, r, prec: int):
    """Cholesky solve with a tiny diagonal lift; None when hopeless."""
    ctx = context_for(prec)
    m = len(G)
    jitter = gmpy2.mpfr(2, prec) ** (-(prec // 2))
    trace = sum((G[i][i] for i in range(m)), gmpy2.mpfr(0, prec))
    shift = ctx.mul(jitter, ctx.add(trace, gmpy2.mpfr(1, prec)))
    L = [[gmpy2.mpfr(0, prec)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1):
            s = ctx.add(G[i][j], shift) if i == j else G[i][j]
            for k in range(j):
                s = ctx.sub(s, ctx.mul(L[i][k], L[j][k]))
            if i == j:
                if s <= 0:
                    return None
                L[i][j] = ctx.sqrt(s)
            else:
                L[i][j] = ctx.div(s, L[j][j])
    y = [gmpy2.mpfr(0, prec)] * m
    for i in range(m):
        s = r[i]
        for k in range(i):
            s = ctx.sub(s, ctx.mul(L[i][k], y[k]))
        y[i] = ctx.div(s, L[i][i])
    out = [gmpy2.mpfr(0, prec)] * m
    for i in range(m - 1, -1, -1):
        s = y[i]
        for k in range(i + 1, m):
            s = ctx.sub(s, ctx.mul(L[k][i], out[k]))
        out[i] = ctx.div(s, L[i][i])
    return out
