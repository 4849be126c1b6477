import numpy as np
import pytest
import scipy.sparse as sp

from wlmg.discretize import BoundaryCondition, GridSpec, algebra_for_bc, assemble, split
from wlmg.structured import AlgebraKind, StructuredOperator
from wlmg.symbols import CosineSymbol, TensorSymbol
from wlmg.transfer import (Projector, coarse_size, cutting_matrix,
                           coarsen_structured, galerkin_sparse,
                           galerkin_structured, project_rank_one)

LAPLACE = CosineSymbol([2.0, -1.0])
KINDS = [AlgebraKind.TAU, AlgebraKind.CIRCULANT, AlgebraKind.DCT3]


def fine_size(kind, n1):
    return 2 * n1 + 1 if kind is AlgebraKind.TAU else 2 * n1


def test_coarse_size_rules():
    assert coarse_size(AlgebraKind.TAU, 31) == 15
    assert coarse_size(AlgebraKind.CIRCULANT, 32) == 16
    assert coarse_size(AlgebraKind.DCT3, 32) == 16
    with pytest.raises(ValueError):
        coarse_size(AlgebraKind.TAU, 16)
    with pytest.raises(ValueError):
        coarse_size(AlgebraKind.CIRCULANT, 15)


def test_cutting_matrix_shapes():
    T = cutting_matrix(AlgebraKind.TAU, 7).toarray()
    assert T.shape == (7, 3)
    assert np.array_equal(np.nonzero(T)[0], [1, 3, 5])
    T = cutting_matrix(AlgebraKind.CIRCULANT, 8).toarray()
    assert np.array_equal(np.nonzero(T)[0], [0, 2, 4, 6])
    T = cutting_matrix(AlgebraKind.DCT3, 8).toarray()
    assert np.array_equal(T.sum(axis=0), [2, 2, 2, 2])


def test_prolong_dirichlet_example():
    P = Projector(AlgebraKind.TAU, (7,))
    e1 = np.zeros(3)
    e1[0] = 1.0
    got = P.prolong(e1)
    want = np.array([1.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0]) / np.sqrt(2.0)
    assert np.allclose(got, want, atol=1e-14)
    assert np.allclose(P.prolong(np.zeros(3)), np.zeros(7))


@pytest.mark.parametrize("kind", KINDS)
def test_matrix_free_matches_sparse(kind):
    rng = np.random.default_rng(8)
    for n1 in (3, 5, 8):
        P = Projector(kind, (fine_size(kind, n1),))
        M = P.to_sparse().toarray()
        for _ in range(5):
            y = rng.standard_normal(P.n_coarse)
            r = rng.standard_normal(P.n_fine)
            assert np.allclose(P.prolong(y), M @ y, atol=1e-13)
            assert np.allclose(P.restrict(r), M.T @ r, atol=1e-13)


@pytest.mark.parametrize("kind", KINDS)
def test_adjoint_identity(kind):
    rng = np.random.default_rng(3)
    for n1 in (4, 6):
        P = Projector(kind, (fine_size(kind, n1),))
        for _ in range(10):
            y = rng.standard_normal(P.n_coarse)
            x = rng.standard_normal(P.n_fine)
            assert np.dot(P.prolong(y), x) == pytest.approx(
                np.dot(y, P.restrict(x)), abs=1e-13)


def test_restrict_examples():
    P = Projector(AlgebraKind.TAU, (7,))
    assert np.allclose(P.restrict(np.zeros(7)), np.zeros(3))
    e1 = np.zeros(3)
    e1[0] = 1.0
    M = P.to_sparse().toarray()
    assert np.allclose(P.restrict(P.prolong(e1)), (M.T @ M) @ e1, atol=1e-13)


@pytest.mark.parametrize("kind", KINDS)
def test_full_rank(kind):
    for n1 in (4, 8):
        P = Projector(kind, (fine_size(kind, n1),))
        sv = np.linalg.svd(P.to_sparse().toarray(), compute_uv=False)
        assert sv.min() > 1e-8


def test_galerkin_structured_self_similarity_dirichlet():
    P = Projector(AlgebraKind.TAU, (15,))
    sym = galerkin_structured(TensorSymbol.from_1d(LAPLACE), P)
    assert np.allclose(sym.terms[0][0].coeffs, [2.0, -1.0], atol=1e-14)


def test_galerkin_structured_zero():
    P = Projector(AlgebraKind.TAU, (15,))
    sym = galerkin_structured(TensorSymbol.from_1d(CosineSymbol([0.0])), P)
    assert sym.terms[0][0].coeffs.tolist() == [0.0]


@pytest.mark.parametrize("kind", KINDS)
def test_galerkin_structured_matches_dense_triple_product(kind):
    n0 = 15 if kind is AlgebraKind.TAU else 16
    P = Projector(kind, (n0,))
    op = StructuredOperator(kind, (n0,), TensorSymbol.from_1d(LAPLACE))
    coarse = galerkin_structured(op.symbol, P)
    coarse_op = StructuredOperator(kind, P.coarse_sizes, coarse)
    p = P.to_sparse().toarray()
    want = p.T @ op.materialize_dense() @ p
    got = coarse_op.materialize_dense()
    rel = np.abs(got - want).max() / np.abs(want).max()
    assert rel <= 1e-11


def test_galerkin_sparse_examples():
    P = Projector(AlgebraKind.TAU, (7,))
    Z = sp.csr_array(sp.eye_array(7) * 0.0)
    assert galerkin_sparse(Z, P).nnz == 0
    I = sp.csr_array(sp.eye_array(7))
    got = galerkin_sparse(I, P).toarray()
    p = P.to_sparse().toarray()
    assert np.allclose(got, p.T @ p, atol=1e-13)


def test_galerkin_sparse_a2():
    grid = GridSpec((31,), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a2"), grid, "a2")
    P = Projector(AlgebraKind.TAU, (31,))
    got = galerkin_sparse(prob.correction, P).toarray()
    p = P.to_sparse().toarray()
    want = p.T @ prob.correction.toarray() @ p
    assert np.abs(got - want).max() <= 1e-11 * max(np.abs(want).max(), 1)
    lam = np.linalg.eigvalsh(got)
    assert lam.min() >= -1e-10


@pytest.mark.parametrize("bc", list(BoundaryCondition))
def test_master_galerkin_identity_1d(bc):
    """Coarse full operator (fold + triple product + rank-one) == p^T A p."""
    kind = algebra_for_bc(bc)
    for n0 in ((15, 31) if kind is AlgebraKind.TAU else (16, 32)):
        grid = GridSpec((n0,), bc)
        prob = split(assemble(grid, "a2"), grid, "a2")
        P = Projector(kind, (n0,))
        scaled = StructuredOperator(
            kind, (n0,), prob.structured.symbol.scaled(prob.a_min),
            rank_one=None if prob.structured.rank_one is None
            else prob.a_min * prob.structured.rank_one)
        coarse_struct = coarsen_structured(scaled, P)
        coarse_R = galerkin_sparse(prob.correction, P)
        got = coarse_struct.materialize_dense() + coarse_R.toarray()
        p = P.to_sparse().toarray()
        A = prob.full_dense()
        want = p.T @ A @ p
        rel = np.abs(got - want).max() / np.abs(want).max()
        assert rel <= 1e-11, (bc, n0, rel)
        assert np.linalg.eigvalsh(want).min() > 0


def test_master_galerkin_identity_2d():
    grid = GridSpec((15, 15), BoundaryCondition.DIRICHLET)
    prob = split(assemble(grid, "a2"), grid, "a2")
    P = Projector(AlgebraKind.TAU, (15, 15))
    scaled = StructuredOperator(AlgebraKind.TAU, (15, 15),
                                prob.structured.symbol.scaled(prob.a_min))
    coarse_struct = coarsen_structured(scaled, P)
    coarse_R = galerkin_sparse(prob.correction, P)
    got = coarse_struct.materialize_dense() + coarse_R.toarray()
    p = P.to_sparse().toarray()
    want = p.T @ prob.full_dense() @ p
    rel = np.abs(got - want).max() / np.abs(want).max()
    assert rel <= 1e-11


def test_rank_one_projection_constant():
    for kind in (AlgebraKind.CIRCULANT, AlgebraKind.DCT3):
        P = Projector(kind, (16,))
        gamma = project_rank_one(1.0, P)
        factor = 8.0 if kind is AlgebraKind.CIRCULANT else 32.0
        assert gamma == pytest.approx(factor)
