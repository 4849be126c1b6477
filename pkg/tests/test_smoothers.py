import numpy as np
import pytest
import scipy.sparse as sp

from wlmg.discretize import BoundaryCondition, GridSpec, assemble, split
from wlmg.mgm import SolverConfig, build_hierarchy
from wlmg.smoothers import cg_steps, compute_omegas, gauss_seidel, richardson


def dense_mv(A):
    return lambda x: A @ x


def test_richardson_fixed_point_and_scalar():
    A = 2.0 * np.eye(1)
    assert richardson(dense_mv(A), np.zeros(1), np.ones(1), 0.5)[0] == pytest.approx(0.5)
    rng = np.random.default_rng(0)
    M = np.diag(rng.uniform(1, 3, size=6))
    b = rng.standard_normal(6)
    xstar = np.linalg.solve(M, b)
    assert np.allclose(richardson(dense_mv(M), xstar, b, 0.3), xstar, atol=1e-14)


def test_omega_values_unit_coefficient():
    grid = GridSpec((7,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a1"), grid, "a1")
    H = build_hierarchy(prob, SolverConfig(method="tgm"))
    lev = H.levels[0]
    assert lev.omega_pre == pytest.approx(0.5)
    assert lev.omega_post == pytest.approx(0.25)


def test_richardson_anorm_monotone():
    grid = GridSpec((15,), BoundaryCondition.DIRICHLET)
    for coeff in ("a1", "a2"):
        prob = split(assemble(grid, coeff), grid, coeff)
        H = build_hierarchy(prob, SolverConfig(method="tgm"))
        A = H.dense_operator(0)
        rng = np.random.default_rng(5)
        b = rng.standard_normal(15)
        xstar = np.linalg.solve(A, b)
        for _ in range(20):
            x = rng.standard_normal(15)
            x2 = richardson(dense_mv(A), x, b, H.levels[0].omega_post)
            e1, e2 = x - xstar, x2 - xstar
            assert e2 @ A @ e2 <= e1 @ A @ e1 + 1e-12


def test_gauss_seidel_examples():
    D = sp.csr_array(sp.diags_array([2.0, 3.0, 4.0]))
    got = gauss_seidel(D, np.zeros(3), np.array([2.0, 3.0, 4.0]))
    assert np.allclose(got, np.ones(3))
    T = sp.csr_array(np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]]))
    got = gauss_seidel(T, np.zeros(3), np.array([1.0, 0.0, 0.0]))
    assert np.allclose(got, [0.5, 0.25, 0.125])
    # fixed point
    b = np.array([1.0, 2.0, 3.0])
    xstar = np.linalg.solve(T.toarray(), b)
    assert np.allclose(gauss_seidel(T, xstar, b), xstar, atol=1e-14)


def test_gauss_seidel_matches_dense_triangular():
    rng = np.random.default_rng(1)
    n = 12
    M = np.diag(rng.uniform(2, 3, n))
    for i in range(n):
        for j in range(n):
            if abs(i - j) == 1:
                M[i, j] = -rng.uniform(0.2, 0.9)
    M = (M + M.T) / 2
    A = sp.csr_array(M)
    x = rng.standard_normal(n)
    b = rng.standard_normal(n)
    got = gauss_seidel(A, x, b)
    DL = np.tril(M)
    want = np.linalg.solve(DL, b - np.triu(M, 1) @ x)
    assert np.allclose(got, want, atol=1e-13)


def test_gauss_seidel_rank_one_matches_dense():
    rng = np.random.default_rng(2)
    n = 10
    M = np.diag(rng.uniform(2, 4, n))
    gamma = 0.7
    A = sp.csr_array(M)
    full = M + gamma * np.ones((n, n)) / n
    x = rng.standard_normal(n)
    b = rng.standard_normal(n)
    got = gauss_seidel(A, x, b, rank_one=gamma)
    want = np.linalg.solve(np.tril(full), b - np.triu(full, 1) @ x)
    assert np.allclose(got, want, atol=1e-13)


def test_gauss_seidel_zero_diagonal_raises():
    A = sp.csr_array(np.array([[0.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ZeroDivisionError):
        gauss_seidel(A, np.zeros(2), np.ones(2))


def test_engine_gs_matches_reference_sweep():
    grid = GridSpec((15,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a2"), grid, "a2")
    H = build_hierarchy(prob, SolverConfig(method="tgm", pre="gauss-seidel",
                                           post="gauss-seidel"))
    lev = H.levels[0]
    rng = np.random.default_rng(3)
    x = rng.standard_normal(15)
    b = rng.standard_normal(15)
    fast = lev.gauss_seidel_step(x, b)
    ref = gauss_seidel(lev.combined, x, b)
    assert np.allclose(fast, ref, rtol=1e-12, atol=1e-13)


def test_gs_anorm_monotone():
    grid = GridSpec((15,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a3"), grid, "a3")
    H = build_hierarchy(prob, SolverConfig(method="tgm", pre="gauss-seidel",
                                           post="gauss-seidel"))
    A = H.dense_operator(0)
    rng = np.random.default_rng(7)
    b = rng.standard_normal(15)
    xstar = np.linalg.solve(A, b)
    for _ in range(20):
        x = rng.standard_normal(15)
        x2 = H.levels[0].gauss_seidel_step(x, b)
        e1, e2 = x - xstar, x2 - xstar
        assert e2 @ A @ e2 <= e1 @ A @ e1 + 1e-12


def test_cg_steps_examples():
    rng = np.random.default_rng(4)
    M = rng.standard_normal((4, 4))
    A = M @ M.T + 4 * np.eye(4)
    b = rng.standard_normal(4)
    # finite termination at s = N
    x = cg_steps(dense_mv(A), np.zeros(4), b, steps=4)
    assert np.linalg.norm(b - A @ x) <= 1e-10
    # fixed point
    xstar = np.linalg.solve(A, b)
    assert np.allclose(cg_steps(dense_mv(A), xstar, b, steps=1), xstar)
    # closed-form single step from zero
    x1 = cg_steps(dense_mv(A), np.zeros(4), b, steps=1)
    want = (b @ b) / (b @ A @ b) * b
    assert np.allclose(x1, want, atol=1e-13)


def test_cg_diagonal_preconditioned_step():
    rng = np.random.default_rng(8)
    M = rng.standard_normal((5, 5))
    A = M @ M.T + 5 * np.eye(5)
    dinv = 1.0 / np.diag(A)
    b = rng.standard_normal(5)
    x0 = rng.standard_normal(5)
    # one preconditioned step: x + (r.z / z.A.z) z with z = D^{-1} r
    r = b - A @ x0
    z = dinv * r
    want = x0 + (r @ z) / (z @ A @ z) * z
    got = cg_steps(dense_mv(A), x0, b, steps=1, dinv=dinv)
    assert np.allclose(got, want, atol=1e-13)
    # fixed point and finite termination still hold
    xstar = np.linalg.solve(A, b)
    assert np.allclose(cg_steps(dense_mv(A), xstar, b, 1, dinv=dinv), xstar)
    x = cg_steps(dense_mv(A), np.zeros(5), b, steps=5, dinv=dinv)
    assert np.linalg.norm(b - A @ x) <= 1e-9


def test_smoother_purity():
    grid = GridSpec((15,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a2"), grid, "a2")
    H = build_hierarchy(prob, SolverConfig(method="tgm", pre="gauss-seidel",
                                           post="richardson"))
    lev = H.levels[0]
    rng = np.random.default_rng(11)
    x = rng.standard_normal(15)
    b = rng.standard_normal(15)
    for fn in (lambda: lev.gauss_seidel_step(x, b),
               lambda: richardson(lambda v: lev.matvec(v), x, b, lev.omega_post),
               lambda: cg_steps(lambda v: lev.matvec(v), x, b, 1)):
        r1, r2 = fn(), fn()
        assert np.array_equal(r1, r2)
    assert np.array_equal(x, x)  # inputs untouched


def test_post_smoother_spectrum_in_unit_interval():
    for coeff in ("a1", "a2", "a3"):
        grid = GridSpec((15,), BoundaryCondition.DIRICHLET)
        prob = split(assemble(grid, coeff), grid, coeff)
        H = build_hierarchy(prob, SolverConfig(method="tgm"))
        A = H.dense_operator(0)
        lam = np.linalg.eigvalsh(A)
        w_pre, w_post = H.levels[0].omega_pre, H.levels[0].omega_post
        assert np.all(np.abs(1 - w_post * lam) < 1.0)
        assert np.all(1 - w_pre * lam > -1.0 - 1e-12)
        assert np.all(1 - w_pre * lam < 1.0)


def test_proposition_style_post_constant_positive():
    from wlmg.verify import smoothing_constant
    grid = GridSpec((15,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a2"), grid, "a2")
    H = build_hierarchy(prob, SolverConfig(method="tgm"))
    A = H.dense_operator(0)
    V = np.eye(15) - H.levels[0].omega_post * A
    assert smoothing_constant(A, V) > 0


def test_compute_omegas_guard():
    with pytest.raises(ValueError):
        compute_omegas(0.0, 0.0)
