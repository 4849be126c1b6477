import numpy as np
import pytest

from wlmg.discretize import (BoundaryCondition, GridSpec, algebra_for_bc,
                             assemble, build_rhs, make_coefficient, split)
from wlmg.structured import StructuredOperator
from wlmg.symbols import CosineSymbol, TensorSymbol

BCS = list(BoundaryCondition)


def quadratic_form_oracle(grid, coeff, u):
    """Independent energy: sum of a_mid (u_i - u_j)^2 over stencil edges."""
    from wlmg.discretize import _edge_groups
    coeff = make_coefficient(coeff, grid.dim)
    total = 0.0
    for a, b, c in _edge_groups(grid, coeff):
        for ai, bi, ci in zip(a, b, c):
            ua = u[ai] if ai >= 0 else 0.0
            ub = u[bi] if bi >= 0 else 0.0
            total += ci * (ua - ub) ** 2
    return total


def test_assemble_unit_1d_dirichlet():
    grid = GridSpec((3,), BoundaryCondition.DIRICHLET)
    A = assemble(grid, "a1").toarray()
    assert np.array_equal(A, [[2., -1., 0.], [-1., 2., -1.], [0., -1., 2.]])


def test_assemble_unit_1d_periodic():
    grid = GridSpec((4,), BoundaryCondition.PERIODIC)
    A = assemble(grid, "a1").toarray()
    assert np.array_equal(A[0], [2., -1., 0., -1.])


def test_assemble_variable_row_values():
    grid = GridSpec((3,), BoundaryCondition.DIRICHLET)
    A = assemble(grid, lambda x: x).toarray()
    assert np.allclose(A[1], [-0.375, 1.0, -0.625], atol=1e-15)


@pytest.mark.parametrize("bc", BCS)
def test_unit_coefficient_equals_algebra_matrix(bc):
    for sizes in [(7,), (16,), (5, 6) if bc is not BoundaryCondition.DIRICHLET else (5, 7)]:
        grid = GridSpec(sizes, bc)
        A = assemble(grid, "a1").toarray()
        sym = TensorSymbol.separable_sum([CosineSymbol([2.0, -1.0])] * grid.dim)
        M = StructuredOperator(algebra_for_bc(bc), sizes, sym).materialize_dense()
        assert np.array_equal(A, M)


@pytest.mark.parametrize("bc", BCS)
def test_quadratic_form_identity(bc):
    rng = np.random.default_rng(12)
    for sizes, coeff in [((9,), "a2"), ((8, 8), "a2")]:
        if bc is BoundaryCondition.DIRICHLET:
            sizes = tuple(n - 1 if n % 2 == 0 else n for n in sizes)
        grid = GridSpec(sizes, bc)
        A = assemble(grid, coeff)
        for _ in range(5):
            u = rng.standard_normal(grid.n_total)
            got = float(u @ (A @ u))
            want = quadratic_form_oracle(grid, coeff, u)
            assert got == pytest.approx(want, rel=1e-12)


def test_split_unit_coefficient_zero_correction():
    grid = GridSpec((9,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a1"), grid, "a1")
    assert prob.a_min == 1.0
    assert abs(prob.correction).max() == 0.0


def test_split_amin_and_psd_a2():
    grid = GridSpec((7,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a2"), grid, "a2")
    assert prob.a_min == pytest.approx(np.exp(1.0 / 16.0))
    lam = np.linalg.eigvalsh(prob.correction.toarray())
    assert lam.min() >= -1e-10


def test_split_reconstruction_exact():
    for bc in BCS:
        sizes = (15,) if bc is BoundaryCondition.DIRICHLET else (16,)
        grid = GridSpec(sizes, bc)
        A = assemble(grid, "a2")
        prob = split(A, grid, "a2")
        base = StructuredOperator(algebra_for_bc(bc), sizes,
                                  prob.structured.symbol).to_sparse()
        recon = prob.a_min * base.toarray() + prob.correction.toarray()
        assert np.abs(recon - A.toarray()).max() <= 1e-13


def test_split_full_operator_spd():
    for bc in BCS:
        sizes = (16,) if bc is not BoundaryCondition.DIRICHLET else (15,)
        grid = GridSpec(sizes, bc)
        prob = split(assemble(grid, "a2"), grid, "a2")
        lam = np.linalg.eigvalsh(prob.full_dense())
        assert lam.min() > 0


def test_correction_psd_all_presets():
    cases = [((31,), p, 1) for p in ("a1", "a2", "a3", "a2k:2")]
    cases += [((15, 15), p, 2) for p in ("a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8")]
    for sizes, preset, dim in cases:
        for bc in BCS:
            s = sizes if bc is BoundaryCondition.DIRICHLET else tuple(n + 1 for n in sizes)
            grid = GridSpec(s, bc)
            prob = split(assemble(grid, preset), grid, preset)
            lam = np.linalg.eigvalsh(prob.correction.toarray())
            assert lam.min() >= -1e-10, (bc, preset)


def test_infnorm_oracle_a7():
    grid = GridSpec((15, 15), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a7"), grid, "a7")
    R = prob.correction
    want = np.abs(R.toarray()).sum(axis=1).max()
    from wlmg.smoothers import infinity_norm
    assert infinity_norm(R) == pytest.approx(want)


def test_build_rhs_modes():
    grid = GridSpec((3,), BoundaryCondition.DIRICHLET)
    assert np.allclose(build_rhs(grid, "ones"), [0.0625] * 3)
    r1 = build_rhs(grid, "random", seed=42)
    r2 = build_rhs(grid, "random", seed=42)
    assert np.array_equal(r1, r2)
    e1 = np.zeros(3)
    e1[0] = 1.0
    assert np.allclose(build_rhs(grid, "manufactured", u_true=e1), [2.0, -1.0, 0.0])


def test_coefficient_errors():
    grid = GridSpec((5,), BoundaryCondition.DIRICHLET)
    with pytest.raises(ValueError):
        assemble(grid, lambda x: x - 0.5)   # nonpositive samples
    with pytest.raises(ValueError):
        make_coefficient("a99", 1)
    with pytest.raises(ValueError):
        make_coefficient("a4", 1)           # square-only preset
    with pytest.raises(ValueError):
        make_coefficient("a2k:x", 1)


def test_piecewise_tie_break():
    # midpoints with a coordinate exactly at 1/2 take the delta branch
    a7 = make_coefficient("a7", 2)
    assert a7(0.5, 0.25) == 100.0
    assert a7(0.25, 0.5) == 100.0
    assert a7(0.25, 0.25) == 1.0


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec((2,), BoundaryCondition.DIRICHLET)
    with pytest.raises(ValueError):
        GridSpec((5, 5, 5), BoundaryCondition.DIRICHLET)
