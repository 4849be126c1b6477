"""Dense brute-force checks of the two-grid convergence theory.

These routines quantify, at small sizes, the two inequalities whose ratio
bounds the two-grid contraction in the energy norm:

* smoothing:      ||V x||_A^2 <= ||x||_A^2 - alpha ||x||_{A X^{-1} A}^2
* approximation:  min_y ||x - p y||_2^2 <= beta ||x||_A^2

with ``X = I`` throughout.  Whenever both constants exist, ``beta >= alpha``
and ``||TGM||_A <= sqrt(1 - alpha/beta) < 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

__all__ = ["smoothing_constant", "approximation_constant",
           "spectral_equivalence", "tgm_contraction", "TheoryReport",
           "theory_report"]

_SIZE_CAP = 1024


def _check_spd(A: np.ndarray, name: str):
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square")
    if A.shape[0] > _SIZE_CAP:
        raise ValueError(f"{name} exceeds the dense oracle cap {_SIZE_CAP}")
    if np.abs(A - A.T).max() > 1e-10 * max(np.abs(A).max(), 1.0):
        raise ValueError(f"{name} must be symmetric")
    if la.eigvalsh(A).min() <= 0:
        raise ValueError(f"{name} must be positive definite")


def smoothing_constant(A: np.ndarray, V: np.ndarray, X: np.ndarray | None = None) -> float:
    """Largest ``alpha`` with ``V^T A V <= A - alpha * A X^{-1} A`` (X = I default)."""
    _check_spd(A, "A")
    gap = A - V.T @ A @ V
    if X is None:
        W = A @ A
    else:
        W = A @ la.solve(X, A, assume_a="pos")
    W = 0.5 * (W + W.T)
    vals = la.eigvalsh(0.5 * (gap + gap.T), W)
    return float(vals.min())


def approximation_constant(A: np.ndarray, p: np.ndarray) -> float:
    """``beta = max_x ||(I - Pi_p) x||_2^2 / ||x||_A^2`` for full-rank ``p``."""
    _check_spd(A, "A")
    q, _ = np.linalg.qr(p)
    if np.linalg.matrix_rank(p) < p.shape[1]:
        raise ValueError("p must have full column rank")
    n = A.shape[0]
    complement = np.eye(n) - q @ q.T
    w, U = la.eigh(A)
    inv_sqrt = U @ np.diag(w ** -0.5) @ U.T
    M = inv_sqrt @ complement @ inv_sqrt
    return float(la.eigvalsh(0.5 * (M + M.T)).max())


def spectral_equivalence(A: np.ndarray, B: np.ndarray) -> tuple:
    """Extreme generalized eigenvalues of the pencil (A, B), both SPD."""
    _check_spd(A, "A")
    _check_spd(B, "B")
    vals = la.eigvalsh(A, B)
    return float(vals.min()), float(vals.max())


def tgm_contraction(A: np.ndarray, M: np.ndarray) -> float:
    """Energy-norm of an iteration matrix: ``||A^{1/2} M A^{-1/2}||_2``."""
    _check_spd(A, "A")
    w, U = la.eigh(A)
    sqrtA = U @ np.diag(w ** 0.5) @ U.T
    inv_sqrtA = U @ np.diag(w ** -0.5) @ U.T
    return float(np.linalg.norm(sqrtA @ M @ inv_sqrtA, 2))


@dataclass
class TheoryReport:
    """Measured convergence-theory constants for one configuration."""

    bc: str
    coeff: str
    n: int
    alpha_post: float
    beta: float
    bound: float
    measured_contraction: float
    theta1: float
    theta2: float

    @property
    def chain_holds(self) -> bool:
        return (self.alpha_post > 0 and self.beta >= self.alpha_post
                and self.bound < 1.0
                and self.measured_contraction <= self.bound + 1e-8)


def theory_report(bc, coeff, n: int, pre: str = "richardson",
                  post: str = "richardson") -> TheoryReport:
    """Run the full dense chain on a two-level hierarchy for one setup."""
    from .discretize import BoundaryCondition, GridSpec, assemble, make_coefficient, split
    from .mgm import SolverConfig, build_hierarchy, dense_iteration_matrix

    bc = BoundaryCondition(bc) if not isinstance(bc, BoundaryCondition) else bc
    grid = GridSpec((n,), bc)
    coeff = make_coefficient(coeff, 1)
    A_sparse = assemble(grid, coeff)
    problem = split(A_sparse, grid, coeff)
    H = build_hierarchy(problem, SolverConfig(method="tgm", pre=pre, post=post))

    A = H.dense_operator(0)
    p = H.levels[0].projector.to_sparse().toarray()
    V_post = np.eye(len(A)) - H.levels[0].omega_post * A
    alpha = smoothing_constant(A, V_post)
    beta = approximation_constant(A, p)
    bound = float(np.sqrt(max(1.0 - alpha / beta, 0.0)))
    contraction = tgm_contraction(A, dense_iteration_matrix(H))

    # pencil of the (corrected, if singular) weighted vs unit-coefficient operators
    base_problem = split(assemble(grid, "a1"), grid, "a1")
    theta1, theta2 = spectral_equivalence(problem.full_dense(), base_problem.full_dense())
    return TheoryReport(bc.value, coeff.name, n, alpha, beta, bound,
                        contraction, theta1, theta2)
