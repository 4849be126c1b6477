"""Two-grid and V-cycle engines over the structured-plus-correction splitting.

``build_hierarchy`` runs the pre-computing phase once: per-level structured
symbols (by folding), sparse corrections (by sparse triple products),
smoothing parameters, Gauss-Seidel triangular factors, and the coarsest
direct solver.  Hierarchies are immutable afterwards; every solve owns its
iterate, residual history, and arithmetic-operation counter, so concurrent
solves against one hierarchy are safe.

The coarsest level uses a sparse direct factorization (a banded/2-D sparse
LU keeps the per-iteration cost linear in N); when a rank-one correction is
present the coarse matrix is dense-factorized instead, since the rank-one
term is dense.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .discretize import AssembledProblem
from .smoothers import (cg_steps, compute_omegas, gauss_seidel, infinity_norm,
                        richardson)
from .structured import AlgebraKind, StructuredOperator
from .transfer import Projector, coarse_size, coarsen_structured, galerkin_sparse

__all__ = ["OpCounter", "SolverConfig", "SolveReport", "LevelHierarchy",
           "build_hierarchy", "tgm_iterate", "vcycle", "solve",
           "dense_iteration_matrix"]

SMOOTHERS = ("richardson", "gauss-seidel", "cg")


class OpCounter:
    """Additive counter of (nominal) floating-point operations."""

    __slots__ = ("total",)

    def __init__(self):
        self.total = 0

    def add(self, n: int):
        self.total += int(n)


@dataclass(frozen=True)
class SolverConfig:
    """Cycle type, smoother slots, and Richardson damping convention.

    ``richardson_scaling`` selects how the Richardson step is damped:

    * ``"global"``:   x + omega (b - A x),        omega = c / (sup|symbol| + ||R||_inf)
    * ``"diagonal"``: x + omega D^{-1} (b - A x), omega = c / || |D^{-1/2} A D^{-1/2}| ||_inf

    with c = 2 for pre- and c = 1 for post-smoothing.  The two coincide for
    the unit coefficient; for variable coefficients the diagonal form keeps
    the damping locally matched to the operator scale.
    """

    method: str = "mgm"            # "tgm" (two levels) or "mgm" (V-cycle)
    pre: str = "richardson"
    post: str = "richardson"
    nu_pre: int = 1
    nu_post: int = 1
    cg_smooth_steps: int = 1
    cg_preconditioner: str = "none"
    richardson_scaling: str = "global"

    def __post_init__(self):
        if self.method not in ("tgm", "mgm"):
            raise ValueError(f"unknown method {self.method!r}")
        for name in (self.pre, self.post):
            if name not in SMOOTHERS:
                raise ValueError(f"unknown smoother {name!r}")
        if self.richardson_scaling not in ("global", "diagonal"):
            raise ValueError(f"unknown scaling {self.richardson_scaling!r}")
        if self.cg_preconditioner not in ("none", "diagonal"):
            raise ValueError(f"unknown CG preconditioner {self.cg_preconditioner!r}")
        if min(self.nu_pre, self.nu_post, self.cg_smooth_steps) < 1:
            raise ValueError("smoothing step counts must be >= 1")

    @property
    def is_linear(self) -> bool:
        return "cg" not in (self.pre, self.post)


@dataclass
class SolveReport:
    """Outcome of one outer iteration run."""

    iterations: int
    residuals: list
    converged: bool
    operations: int
    wall_time: float

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else np.inf


class _Level:
    """Per-level data produced in the pre-computing phase."""

    def __init__(self, structured: StructuredOperator, correction: sp.csr_array):
        self.structured = structured
        self.correction = correction
        self.sizes = structured.sizes
        self.n = structured.n_total
        self.gamma = structured.rank_one
        combined = sp.csr_array(structured.to_sparse() + correction)
        combined.sort_indices()
        self.combined = combined
        sup = structured.symbol.sup_norm()
        self.omega_pre, self.omega_post = compute_omegas(sup, infinity_norm(correction))
        diag = combined.diagonal()
        if self.gamma is not None:
            diag = diag + self.gamma / self.n
        self.dinv = 1.0 / diag
        rootinv = np.sqrt(self.dinv)
        normalized = sp.diags_array(rootinv) @ abs(combined) @ sp.diags_array(rootinv)
        bound = np.asarray(normalized.sum(axis=1)).ravel()
        if self.gamma is not None:
            bound = bound + (self.gamma / self.n) * rootinv * rootinv.sum()
        self.omega_pre_scaled, self.omega_post_scaled = compute_omegas(float(bound.max()), 0.0)
        self.projector = None        # set for all but the coarsest level
        self._gs = None
        self._direct = None

    # -- operator ---------------------------------------------------------
    def matvec(self, x: np.ndarray, ops: OpCounter | None = None) -> np.ndarray:
        y = self.combined @ x
        if self.gamma is not None:
            y = y + (self.gamma * x.sum() / self.n)
        if ops is not None:
            ops.add(2 * self.combined.nnz + (3 * self.n if self.gamma is not None else 0))
        return y

    def dense_operator(self) -> np.ndarray:
        M = self.combined.toarray()
        if self.gamma is not None:
            M = M + self.gamma / self.n
        return M

    # -- Gauss-Seidel -----------------------------------------------------
    def _ensure_gs(self):
        if self._gs is None:
            if self.gamma is None:
                lower = sp.csc_array(sp.tril(self.combined, format="csc"))
                lu = spla.splu(lower, permc_spec="NATURAL", diag_pivot_thresh=0.0)
                upper = sp.csr_array(sp.triu(self.combined, k=1, format="csr"))
                self._gs = ("triangular", lu, upper, lu.L.nnz + lu.U.nnz)
            else:
                self._gs = ("sweep",)
        return self._gs

    def gauss_seidel_step(self, x, b, ops=None):
        gs = self._ensure_gs()
        if gs[0] == "triangular":
            _, lu, upper, factor_nnz = gs
            out = lu.solve(b - upper @ x)
            if ops is not None:
                ops.add(2 * upper.nnz + 2 * factor_nnz + self.n)
            return out
        return gauss_seidel(self.combined, x, b, rank_one=(self.gamma or 0.0), ops=ops)

    # -- coarsest direct solve --------------------------------------------
    def _ensure_direct(self):
        if self._direct is None:
            if self.gamma is None:
                lu = spla.splu(sp.csc_matrix(self.combined))
                self._direct = ("sparse", lu, lu.L.nnz + lu.U.nnz)
            else:
                if self.n > 4096:
                    raise ValueError(
                        "direct solve with a rank-one term is dense and capped at "
                        f"N <= 4096 (got {self.n}); use a deeper hierarchy")
                lu, piv = la.lu_factor(self.dense_operator())
                self._direct = ("dense", (lu, piv), 2 * self.n * self.n)
        return self._direct

    def direct_solve(self, b, ops=None):
        kind, factor, cost = self._ensure_direct()
        if ops is not None:
            ops.add(cost)
        if kind == "sparse":
            return factor.solve(b)
        return la.lu_solve(factor, b)


class LevelHierarchy:
    """Immutable ladder of levels plus the solver configuration."""

    def __init__(self, levels, config: SolverConfig):
        self.levels = levels
        self.config = config

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def matvec(self, s: int, x: np.ndarray, ops=None) -> np.ndarray:
        return self.levels[s].matvec(x, ops)

    def dense_operator(self, s: int) -> np.ndarray:
        return self.levels[s].dense_operator()


def _size_chain(kind: AlgebraKind, sizes, method: str):
    target = 15 if kind is AlgebraKind.TAU else 16
    chain = [tuple(sizes)]
    if method == "tgm":
        try:
            chain.append(tuple(coarse_size(kind, n) for n in sizes))
        except ValueError as exc:
            raise ValueError(f"size chain infeasible for TGM: {exc}") from None
        return chain
    while all(n > target for n in chain[-1]):
        try:
            chain.append(tuple(coarse_size(kind, n) for n in chain[-1]))
        except ValueError:
            break
    return chain


def build_hierarchy(problem: AssembledProblem, config: SolverConfig | None = None
                    ) -> LevelHierarchy:
    """Pre-computing phase: all level data, computed once."""
    config = config or SolverConfig()
    base = problem.structured
    chain = _size_chain(base.kind, base.sizes, config.method)

    scaled = StructuredOperator(
        base.kind, base.sizes, base.symbol.scaled(problem.a_min),
        rank_one=None if base.rank_one is None else problem.a_min * base.rank_one)
    levels = [_Level(scaled, sp.csr_array(problem.correction))]
    for fine_sizes in chain[:-1]:
        proj = Projector(base.kind, fine_sizes)
        levels[-1].projector = proj
        coarse_struct = coarsen_structured(levels[-1].structured, proj)
        coarse_R = galerkin_sparse(levels[-1].correction, proj)
        levels.append(_Level(coarse_struct, coarse_R))

    hierarchy = LevelHierarchy(levels, config)
    levels[-1]._ensure_direct()
    if "gauss-seidel" in (config.pre, config.post):
        for lev in levels[:-1]:
            lev._ensure_gs()
    return hierarchy


def _smooth(H: LevelHierarchy, s: int, x, b, which: str, ops=None):
    lev = H.levels[s]
    cfg = H.config
    name = cfg.pre if which == "pre" else cfg.post
    nu = cfg.nu_pre if which == "pre" else cfg.nu_post
    diagonal = cfg.richardson_scaling == "diagonal"
    if diagonal:
        omega = lev.omega_pre_scaled if which == "pre" else lev.omega_post_scaled
    else:
        omega = lev.omega_pre if which == "pre" else lev.omega_post
    mv = lambda v: lev.matvec(v, ops)
    for _ in range(nu):
        if name == "richardson":
            x = richardson(mv, x, b, omega, dinv=lev.dinv if diagonal else None, ops=ops)
        elif name == "gauss-seidel":
            x = lev.gauss_seidel_step(x, b, ops)
        else:
            cg_dinv = lev.dinv if cfg.cg_preconditioner == "diagonal" else None
            x = cg_steps(mv, x, b, cfg.cg_smooth_steps, dinv=cg_dinv, ops=ops)
    return x


def vcycle(H: LevelHierarchy, s: int, x: np.ndarray, b: np.ndarray,
           ops: OpCounter | None = None) -> np.ndarray:
    """One cycle of the recursive scheme starting at level ``s``."""
    if s == H.depth:
        return H.levels[s].direct_solve(b, ops)
    lev = H.levels[s]
    x = _smooth(H, s, x, b, "pre", ops)
    r = b - lev.matvec(x, ops)
    r_coarse = lev.projector.restrict(r, ops)
    y_coarse = vcycle(H, s + 1, np.zeros(H.levels[s + 1].n), r_coarse, ops)
    x = x + lev.projector.prolong(y_coarse, ops)
    if ops is not None:
        ops.add(2 * lev.n)
    return _smooth(H, s, x, b, "post", ops)


def tgm_iterate(H: LevelHierarchy, x: np.ndarray, b: np.ndarray,
                ops: OpCounter | None = None) -> np.ndarray:
    """One two-grid iteration (exact coarse solve on a two-level hierarchy)."""
    if H.n_levels != 2:
        raise ValueError("tgm_iterate needs a two-level hierarchy (method='tgm')")
    return vcycle(H, 0, x, b, ops)


def solve(H: LevelHierarchy, b: np.ndarray, tol: float = 1e-7,
          max_iter: int | None = None, x0: np.ndarray | None = None):
    """Outer iteration from the zero initial guess until the relative
    Euclidean residual drops below ``tol``; returns ``(x, SolveReport)``."""
    if max_iter is None:
        max_iter = H.levels[0].n
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    b = np.asarray(b, dtype=float)
    x = np.zeros(H.levels[0].n) if x0 is None else np.array(x0, dtype=float)
    ops = OpCounter()
    t0 = time.perf_counter()
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return x, SolveReport(0, [], True, 0, time.perf_counter() - t0)
    residuals = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        x = vcycle(H, 0, x, b, ops)
        r = b - H.levels[0].matvec(x, ops)
        relres = float(np.linalg.norm(r)) / bnorm
        ops.add(2 * H.levels[0].n)
        residuals.append(relres)
        if relres < tol:
            converged = True
            break
    return x, SolveReport(it, residuals, converged, ops.total,
                          time.perf_counter() - t0)


def dense_iteration_matrix(H: LevelHierarchy) -> np.ndarray:
    """Column-by-column extraction of the cycle's error-propagation matrix.

    Valid for linear smoother pairs only (CG smoothing makes the cycle
    nonlinear); relies on ``cycle(x, b=0) = M x``.
    """
    if not H.config.is_linear:
        raise ValueError("iteration matrix is undefined for CG smoothing")
    n = H.levels[0].n
    if n > 4096:
        raise ValueError("dense extraction capped at N <= 4096")
    M = np.empty((n, n))
    zero = np.zeros(n)
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        M[:, j] = vcycle(H, 0, e, zero)
    return M
