"""Smoothing iterations: Richardson, forward Gauss-Seidel, and CG steps.

Richardson damping factors follow the structured-plus-correction splitting:

    omega_pre  = 2 / (sup|symbol| + ||R||_inf)
    omega_post = 1 / (sup|symbol| + ||R||_inf)

computed per level from that level's (scaled) structured symbol and sparse
correction, which keeps ``omega * lambda_max <= 2`` level-wise.

All smoothing calls are pure: they return a new iterate and never mutate
their inputs, so repeated calls with identical inputs are bit-identical.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

__all__ = ["richardson", "gauss_seidel", "cg_steps", "compute_omegas", "infinity_norm"]


def infinity_norm(A: sp.csr_array) -> float:
    """Max absolute row sum of a sparse matrix."""
    if A.nnz == 0:
        return 0.0
    return float(abs(A).sum(axis=1).max())


def compute_omegas(symbol_sup: float, r_inf: float) -> tuple:
    denom = symbol_sup + r_inf
    if denom <= 0:
        raise ValueError("smoothing denominator must be positive")
    return 2.0 / denom, 1.0 / denom


def richardson(matvec, x: np.ndarray, b: np.ndarray, omega: float,
               dinv: np.ndarray | None = None, ops=None) -> np.ndarray:
    """One damped Richardson step ``x + omega (b - A x)``.

    With ``dinv`` the residual is scaled entrywise first (relaxed-Jacobi
    form ``x + omega D^{-1} (b - A x)``).
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    r = b - matvec(x)
    if dinv is not None:
        r = dinv * r
    if ops is not None:
        ops.add((3 if dinv is None else 4) * len(x))
    return x + omega * r


def gauss_seidel(A: sp.csr_array, x: np.ndarray, b: np.ndarray,
                 rank_one: float = 0.0, ops=None) -> np.ndarray:
    """One forward Gauss-Seidel sweep on ``A + rank_one * e e^T / N``.

    The optional uniform rank-one term is handled with running sums of the
    already-updated and not-yet-updated entries, keeping the sweep O(nnz).
    """
    indptr, indices, data = A.indptr, A.indices, A.data
    n = A.shape[0]
    x = np.array(x, dtype=float)
    rho = rank_one / n if rank_one else 0.0
    if rho == 0.0:
        for i in range(n):
            lo, hi = indptr[i], indptr[i + 1]
            cols = indices[lo:hi]
            vals = data[lo:hi]
            diag = 0.0
            acc = b[i]
            for c, v in zip(cols, vals):
                if c == i:
                    diag = v
                else:
                    acc -= v * x[c]
            if diag == 0.0:
                raise ZeroDivisionError(f"zero diagonal entry in row {i}")
            x[i] = acc / diag
    else:
        total = float(x.sum())  # mixed sum: updated entries below i, old above
        for i in range(n):
            lo, hi = indptr[i], indptr[i + 1]
            cols = indices[lo:hi]
            vals = data[lo:hi]
            diag = 0.0
            acc = b[i]
            for c, v in zip(cols, vals):
                if c == i:
                    diag = v
                else:
                    acc -= v * x[c]
            acc -= rho * (total - x[i])
            diag += rho
            if diag == 0.0:
                raise ZeroDivisionError(f"zero diagonal entry in row {i}")
            old = x[i]
            x[i] = acc / diag
            total += x[i] - old
    if ops is not None:
        ops.add(2 * A.nnz + 4 * n)
    return x


def cg_steps(matvec, x: np.ndarray, b: np.ndarray, steps: int = 1,
             dinv: np.ndarray | None = None, ops=None) -> np.ndarray:
    """``steps`` conjugate-gradient iterations restarted from ``x``.

    ``dinv`` switches to the diagonally preconditioned recursion (search
    directions built from ``D^{-1} r``), which keeps the step locally scaled
    for strongly varying coefficients.  Returns the current iterate
    unchanged on a zero residual; a breakdown (non-positive curvature) also
    returns the iterate reached so far.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x = np.array(x, dtype=float)
    r = b - matvec(x)
    z = r if dinv is None else dinv * r
    rz = float(r @ z)
    if rz == 0.0:
        return x
    p = z.copy()
    for _ in range(steps):
        Ap = matvec(p)
        pAp = float(p @ Ap)
        if pAp <= 0.0:
            break
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        z = r if dinv is None else dinv * r
        rz_new = float(r @ z)
        if ops is not None:
            ops.add((10 if dinv is None else 12) * len(x))
        if rz_new == 0.0:
            break
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x
