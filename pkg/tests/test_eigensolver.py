'Unit tests for the Hermitian eigensolvers'

import numpy as np
import pytest

from orderloss._modules.eigensolver import Eigensolver, Jacobi, Lapack
from orderloss._modules.eigensolver.jacobi import round_robin
from orderloss.numkit import Operator, hermitian_eig, use_eigensolver, get_eigensolver
from orderloss.orderloss_utils.get_subclass import get_subclass


def random_hermitian(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


@pytest.mark.parametrize("n", [2, 3, 7, 16, 33])
def test_round_robin(n):
    rounds = round_robin(n)
    pairs = [pair for p, q in rounds for pair in zip(p.tolist(), q.tolist())]
    # every pair exactly once
    assert sorted(pairs) == [(p, q) for p in range(n) for q in range(p + 1, n)]
    # pairs of one round are disjoint
    for p, q in rounds:
        indices = np.concatenate([p, q])
        assert len(set(indices.tolist())) == indices.size


@pytest.mark.parametrize("n", [1, 2, 5, 16, 40])
def test_jacobi_against_lapack(n, rng):
    matrix = random_hermitian(n, rng)
    matrix_copy = matrix.copy()
    values, vectors = Jacobi().decompose(matrix)
    reference, _ = Lapack().decompose(matrix)

    np.testing.assert_allclose(values, reference, atol=1e-10)
    np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(n), atol=1e-12)
    np.testing.assert_allclose((vectors * values) @ vectors.conj().T, matrix, atol=1e-10)
    # input unchanged
    np.testing.assert_array_equal(matrix, matrix_copy)


def test_jacobi_degenerate():
    matrix = np.kron(np.eye(4), np.array([[1., 1j], [-1j, 1.]]))
    values, vectors = Jacobi().decompose(matrix)
    np.testing.assert_allclose(values, [0.] * 4 + [2.] * 4, atol=1e-12)
    np.testing.assert_allclose((vectors * values) @ vectors.conj().T, matrix, atol=1e-12)


def test_jacobi_zero_matrix():
    values, vectors = Jacobi().decompose(np.zeros((4, 4)))
    np.testing.assert_array_equal(values, np.zeros(4))
    np.testing.assert_array_equal(vectors, np.eye(4))


def test_jacobi_reproducible(rng):
    matrix = random_hermitian(12, rng)
    first = Jacobi().decompose(matrix)
    second = Jacobi().decompose(matrix)
    np.testing.assert_array_equal(first[0], second[0])
    np.testing.assert_array_equal(first[1], second[1])


def test_jacobi_not_converged(rng):
    with pytest.raises(np.linalg.LinAlgError, match="did not converge"):
        Jacobi(max_sweeps=0).decompose(random_hermitian(6, rng))


@pytest.mark.parametrize("name, cls", [
    ("Jacobi", Jacobi), ("jacobi", Jacobi), ("Lapack", Lapack), ("lapack", Lapack)])
def test_get_subclass(name, cls):
    solver = get_subclass(Eigensolver, {"name": name})
    assert isinstance(solver, cls)


def test_get_subclass_kwargs():
    solver = get_subclass(Eigensolver, {"name": "Jacobi", "tol": 1e-10, "max_sweeps": 5})
    assert solver.tol == 1e-10
    assert solver.max_sweeps == 5
    assert get_subclass(Eigensolver, {"name": "Jacobi"}, initialize=False) is Jacobi


def test_get_subclass_unknown():
    with pytest.raises(ModuleNotFoundError, match="No subclass"):
        get_subclass(Eigensolver, {"name": "Householder"})


def test_use_eigensolver(rng):
    matrix = random_hermitian(8, rng)
    try:
        use_eigensolver({"name": "Lapack"})
        assert isinstance(get_eigensolver(), Lapack)
        lapack = hermitian_eig(Operator(matrix, hermitian=True)).eigenvalues
        use_eigensolver({"name": "Jacobi"})
        jacobi = hermitian_eig(Operator(matrix, hermitian=True)).eigenvalues
    finally:
        use_eigensolver()
    np.testing.assert_allclose(jacobi, lapack, atol=1e-10)
