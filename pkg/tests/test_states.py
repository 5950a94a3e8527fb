'Unit tests for the initial state, the shuffle channel and the closed form of sigma'

import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from orderloss.coupled_basis import degeneracy
from orderloss.numkit import (SizeGuardError, StateVector, basis_ket, hermitian_eig,
                              interleaved_to_blocks, permutation_operator, trace_distance,
                              von_neumann_entropy)
from orderloss.quantities import information_loss
from orderloss.states import (
    SchmidtParam, initial_state, permute_bob, shuffle_channel, sector_probabilities,
    block_coefficients, closed_form_sigma, assemble_operator, alice_reduction_invariance,
    cq_joint_state, mutual_information)


def test_schmidt_param():
    s = SchmidtParam.from_alpha_sq("9/25")
    assert s.alpha == pytest.approx(0.6)
    assert s.beta == pytest.approx(0.8)
    assert s.alpha_sq + s.beta_sq == 1.
    assert SchmidtParam.from_alpha(0.6).alpha_sq == pytest.approx(0.36)
    assert SchmidtParam.from_alpha_sq("1/2") == SchmidtParam(alpha_sq=0.5)
    with pytest.raises(ValueError):
        SchmidtParam.from_alpha(1.2)
    with pytest.raises(ValidationError):
        SchmidtParam(alpha_sq=-0.1)


def test_initial_state(partial):
    psi = initial_state(1, partial)
    assert psi.layout == ('A', 'A', 'B', 'B')
    # |x>_A |x>_B with amplitude alpha**(#zeros) beta**(#ones)
    expected = {0b0000: 0.36, 0b0101: 0.48, 0b1010: 0.48, 0b1111: 0.64}
    for index, amplitude in expected.items():
        assert psi.amplitudes[index] == pytest.approx(amplitude)
    assert np.count_nonzero(psi.amplitudes) == 4


def test_initial_state_is_product_of_pairs(partial):
    pair = np.array([partial.alpha, 0, 0, partial.beta])
    interleaved = StateVector(np.kron(np.kron(pair, pair), np.kron(pair, pair)))
    np.testing.assert_allclose(interleaved_to_blocks(interleaved).amplitudes,
                               initial_state(2, partial).amplitudes, atol=1e-15)
    with pytest.raises(ValueError):
        initial_state(0, partial)


def test_permute_bob():
    psi = basis_ket("0001", ('A', 'A', 'B', 'B'))
    swapped = permute_bob(psi, [1, 0])
    np.testing.assert_array_equal(swapped.amplitudes, basis_ket("0010").amplitudes)
    with pytest.raises(ValueError, match="permutation"):
        permute_bob(psi, [0, 0])
    with pytest.raises(ValueError, match="layout"):
        permute_bob(psi.with_layout(('A', 'B', 'A', 'B')), [1, 0])


def test_shuffle_channel_idempotent(partial):
    rho = initial_state(1, partial).projector()
    once = shuffle_channel(rho, 1)
    twice = shuffle_channel(once, 1)
    np.testing.assert_allclose(twice.entries, once.entries, atol=1e-15)
    assert once.trace().real == pytest.approx(1.)
    with pytest.raises(ValueError, match="needs"):
        shuffle_channel(rho, 2)


def test_two_pair_spectrum(max_entangled):
    sigma = shuffle_channel(initial_state(1, max_entangled).projector(), 1)
    values = hermitian_eig(sigma).eigenvalues
    np.testing.assert_allclose(values[-2:], [0.25, 0.75], atol=1e-12)
    np.testing.assert_allclose(values[:-2], 0., atol=1e-12)


def test_sector_probabilities(max_entangled):
    p = sector_probabilities(2, max_entangled)
    assert p[0] == pytest.approx(1 / 32)
    assert p[1] == pytest.approx(1 / 16)
    assert p[2] == pytest.approx(5 / 16)


@pytest.mark.parametrize("J", [1, 2, 5, 16])
@pytest.mark.parametrize("alpha", [0., 0.2, 0.6, 1 / np.sqrt(2), 0.95, 1.])
def test_probabilities_normalized(J, alpha):
    p = sector_probabilities(J, SchmidtParam.from_alpha(alpha))
    assert sum(degeneracy(J, j) ** 2 * p[j] for j in range(J + 1)) == pytest.approx(1.)


def test_block_coefficients(max_entangled, partial):
    np.testing.assert_allclose(block_coefficients(3, 2, max_entangled), 1 / np.sqrt(5))
    c = block_coefficients(2, 1, partial)
    assert np.sum(c ** 2) == pytest.approx(1.)
    # weights alpha**(2(J - m)) beta**(2(J + m)) for m = -1, 0, 1
    ratios = c[1:] ** 2 / c[:-1] ** 2
    np.testing.assert_allclose(ratios, partial.beta_sq / partial.alpha_sq)
    np.testing.assert_array_equal(block_coefficients(2, 1, SchmidtParam.from_alpha(1.)), 0.)


@pytest.mark.parametrize("J", [1, 2])
@pytest.mark.parametrize("alpha", [0., 0.3, 1 / np.sqrt(2), 0.9, 1.])
def test_closed_form_matches_shuffle(J, alpha):
    s = SchmidtParam.from_alpha(alpha)
    brute = shuffle_channel(initial_state(J, s).projector(), J)
    closed = assemble_operator(closed_form_sigma(J, s))
    np.testing.assert_allclose(closed.entries, brute.entries, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.3, 1 / np.sqrt(2)])
def test_entropy_of_sigma(alpha):
    s = SchmidtParam.from_alpha(alpha)
    sigma = assemble_operator(closed_form_sigma(2, s))
    assert von_neumann_entropy(sigma) == pytest.approx(information_loss(2, s), abs=1e-10)


def test_closed_form_entries(partial):
    spectrum = closed_form_sigma(2, partial)
    assert spectrum.materialized
    assert len(spectrum.entries) == sum(degeneracy(2, j) ** 2 for j in range(3))
    for entry in spectrum.entries:
        assert entry.block_state.norm == pytest.approx(1.)
        assert entry.probability == spectrum.probabilities[entry.j]

    large = closed_form_sigma(10, partial)
    assert not large.materialized
    assert large.entries == []
    assert large.entanglement_entropy(0) == 0.
    with pytest.raises(SizeGuardError):
        closed_form_sigma(17, partial)
    with pytest.raises(ValueError):
        closed_form_sigma(0, partial)
    with pytest.raises(SizeGuardError):
        closed_form_sigma(3, partial, materialize=True)


@pytest.mark.parametrize("J", [1, 2])
def test_alice_reduction_invariance(J, partial):
    assert alice_reduction_invariance(J, partial) < 1e-12


@pytest.mark.parametrize("alpha", [0., 0.4, 1 / np.sqrt(2), 1.])
def test_mutual_information_two_pairs(alpha):
    s = SchmidtParam.from_alpha(alpha)
    c = cq_joint_state(1, s)
    assert c.ancilla_dim == 2
    assert c.joint.n_qubits == 5
    assert mutual_information(c) == pytest.approx(information_loss(1, s), abs=1e-10)


def test_mutual_information_four_pairs(partial):
    c = cq_joint_state(2, partial)
    assert c.joint is None
    assert c.ancilla_dim == 24
    assert mutual_information(c) == pytest.approx(information_loss(2, partial), abs=1e-10)


def test_trace_distance_of_shuffle(partial):
    rho = initial_state(1, partial).projector()
    sigma = shuffle_channel(rho, 1)
    # the antisymmetric part carries weight alpha**2 beta**2
    assert trace_distance(rho, sigma) > 0.


@pytest.mark.parametrize("J", [1, 2])
def test_shuffled_state_commutes_with_bob_permutations(J, partial):
    sigma = shuffle_channel(initial_state(J, partial).projector(), J).entries
    n_pairs = 2 * J
    for perm in itertools.permutations(range(n_pairs)):
        p = permutation_operator(2 * n_pairs,
                                 list(range(n_pairs)) + [n_pairs + i for i in perm]).entries
        np.testing.assert_allclose(p @ sigma, sigma @ p, atol=1e-12)


def test_four_pair_spectrum_multiplicities(max_entangled):
    sigma = shuffle_channel(initial_state(2, max_entangled).projector(), 2)
    values = hermitian_eig(sigma).eigenvalues
    for value, multiplicity in ((1 / 32, 4), (1 / 16, 9), (5 / 16, 1)):
        assert np.count_nonzero(np.isclose(values, value, atol=1e-9)) == multiplicity
    assert np.count_nonzero(np.abs(values) > 1e-9) == 14
