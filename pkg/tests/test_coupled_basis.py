'Unit tests for the coupled basis |j, m, alpha>'

import itertools

import numpy as np
import pytest

from orderloss.coupled_basis import (
    CoupledLabel, degeneracy, dicke_block, singlet, representative, spin_operators,
    coupling_paths, build_basis, sector_projector, label_swap_unitary)
from orderloss.numkit import SizeGuardError, basis_ket, permutation_operator


@pytest.mark.parametrize("J, expected", [
    (1, [1, 1]), (2, [2, 3, 1]), (3, [5, 9, 5, 1]), (4, [14, 28, 20, 7, 1])])
def test_degeneracy(J, expected):
    assert [degeneracy(J, j) for j in range(J + 1)] == expected


@pytest.mark.parametrize("J", range(1, 17))
def test_degeneracy_dimension(J):
    assert sum(degeneracy(J, j) * (2 * j + 1) for j in range(J + 1)) == 4 ** J


def test_degeneracy_out_of_range():
    with pytest.raises(ValueError):
        degeneracy(2, 3)
    with pytest.raises(ValueError):
        degeneracy(2, -1)


def test_dicke_and_singlet():
    w = dicke_block(1, 0)
    np.testing.assert_allclose(w.amplitudes,
                               (basis_ket("01").amplitudes + basis_ket("10").amplitudes)
                               / np.sqrt(2))
    np.testing.assert_array_equal(dicke_block(1, 1).amplitudes, basis_ket("11").amplitudes)
    assert dicke_block(2, 0).norm == pytest.approx(1.)
    assert singlet().inner(w) == pytest.approx(0.)
    with pytest.raises(ValueError):
        dicke_block(1, 2)


def test_spin_operators():
    spin = spin_operators(2)
    # |11> is m = 1, singlet has S^2 = 0
    np.testing.assert_allclose(spin.sz @ basis_ket("11").amplitudes, basis_ket("11").amplitudes)
    np.testing.assert_allclose(spin.s2 @ singlet().amplitudes, 0., atol=1e-15)
    np.testing.assert_allclose(spin.sminus @ basis_ket("11").amplitudes,
                               basis_ket("01").amplitudes + basis_ket("10").amplitudes)


@pytest.mark.parametrize("n_qubits", [2, 3, 4, 5])
def test_coupling_paths(n_qubits):
    paths = coupling_paths(n_qubits)
    spin = spin_operators(n_qubits)
    assert sum(multiplet.shape[0] for multiplet in paths.values()) == 2 ** n_qubits
    for path, multiplet in paths.items():
        tj = path[-1]
        for row, tm in zip(multiplet, range(-tj, tj + 1, 2)):
            np.testing.assert_allclose(spin.sz @ row, tm / 2 * row, atol=1e-12)
            np.testing.assert_allclose(spin.s2 @ row, tj / 2 * (tj / 2 + 1) * row, atol=1e-12)


@pytest.mark.parametrize("J", [1, 2, 3])
def test_basis_orthonormal(J):
    basis = build_basis(J)
    matrix = basis.matrix()
    assert len(basis) == 4 ** J
    np.testing.assert_allclose(matrix.conj().T @ matrix, np.eye(4 ** J), atol=1e-12)
    for j in range(J + 1):
        assert basis.degeneracy(j) == degeneracy(J, j)


@pytest.mark.parametrize("J", [1, 2, 3])
def test_representative_is_first(J):
    basis = build_basis(J)
    for j in range(J + 1):
        for m in range(-j, j + 1):
            np.testing.assert_allclose(basis[j, m, 1].amplitudes,
                                       representative(J, j, m).amplitudes, atol=1e-12)


def test_basis_spin_eigenvectors():
    basis = build_basis(2)
    spin = spin_operators(4)
    for label in basis.labels:
        v = basis[label].amplitudes
        np.testing.assert_allclose(spin.s2 @ v, label.j * (label.j + 1) * v, atol=1e-12)
        np.testing.assert_allclose(spin.sz @ v, label.m * v, atol=1e-12)


def test_lowering_consistency():
    # S_- |j, m, alpha> = sqrt(j(j+1) - m(m-1)) |j, m-1, alpha>
    basis = build_basis(2)
    sminus = spin_operators(4).sminus
    for j, alpha in [(1, 1), (1, 2), (1, 3), (2, 1)]:
        for m in range(j, -j, -1):
            lowered = sminus @ basis[j, m, alpha].amplitudes
            np.testing.assert_allclose(
                lowered, np.sqrt(j * (j + 1) - m * (m - 1)) * basis[j, m - 1, alpha].amplitudes,
                atol=1e-12)


def test_permutations_act_on_labels_only():
    # qubit permutations commute with the total spin, so they are block
    # diagonal in (j, m) and act identically for every m
    basis = build_basis(2)
    matrix = basis.matrix()
    index = {label: k for k, label in enumerate(basis.labels)}
    for perm in itertools.permutations(range(4)):
        action = matrix.conj().T @ permutation_operator(4, perm).entries @ matrix
        for a, b in itertools.product(basis.labels, repeat=2):
            if (a.j, a.m) != (b.j, b.m):
                assert abs(action[index[a], index[b]]) < 1e-12
        for j in range(3):
            labels = range(1, degeneracy(2, j) + 1)
            lowest, highest = (
                np.array([[action[index[CoupledLabel(j, m, a)], index[CoupledLabel(j, m, b)]]
                           for b in labels] for a in labels])
                for m in (-j, j))
            np.testing.assert_allclose(lowest, highest, atol=1e-12)


def test_sector_projectors_resolve_identity():
    basis = build_basis(2)
    total = sum(sector_projector(basis, j, alpha).entries
                for j in range(3) for alpha in range(1, degeneracy(2, j) + 1))
    np.testing.assert_allclose(total, np.eye(16), atol=1e-12)
    p = sector_projector(basis, 1, 2).entries
    np.testing.assert_allclose(p @ p, p, atol=1e-12)
    assert np.trace(p).real == pytest.approx(3.)


@pytest.mark.parametrize("j, alpha", [(0, 2), (1, 2), (1, 3), (2, 1)])
def test_label_swap_unitary(j, alpha):
    basis = build_basis(2)
    u = label_swap_unitary(basis, j, alpha).entries
    np.testing.assert_allclose(u.conj().T @ u, np.eye(16), atol=1e-12)
    for m in range(-j, j + 1):
        np.testing.assert_allclose(u @ basis[j, m, alpha].amplitudes,
                                   basis[j, m, 1].amplitudes, atol=1e-12)


def test_invalid_labels():
    basis = build_basis(2)
    with pytest.raises(ValueError, match="invalid label"):
        basis[1, 2, 4]
    with pytest.raises(ValueError, match="invalid label"):
        basis.multiplet(3, 1)
    with pytest.raises(ValueError):
        build_basis(0)
    with pytest.raises(SizeGuardError):
        build_basis(5)


def test_path_table_and_frame(tmp_path):
    basis = build_basis(2)
    assert set(basis.path_table) == {(j, alpha) for j in range(3)
                                     for alpha in range(1, degeneracy(2, j) + 1)}
    assert all(path[-1] == j for (j, _), path in basis.path_table.items())

    frame = basis.to_frame()
    assert list(frame.columns) == ["j", "m", "alpha", "index", "re", "im"]
    frame["weight"] = frame.re ** 2 + frame.im ** 2
    norms = frame.groupby(["j", "m", "alpha"]).weight.sum()
    np.testing.assert_allclose(norms.to_numpy(), 1., atol=1e-12)

    filename = tmp_path / "basis.csv"
    basis.dump_csv(str(filename))
    assert filename.read_text().startswith("j,m,alpha,index,re,im")


def test_highest_weight_phase():
    basis = build_basis(3)
    for j in range(4):
        for alpha in range(1, degeneracy(3, j) + 1):
            amplitudes = basis[j, j, alpha].amplitudes
            first = amplitudes[np.flatnonzero(np.abs(amplitudes) > 1e-12)[0]]
            assert abs(first.imag) < 1e-12
            assert first.real > 0
