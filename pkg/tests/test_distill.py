'Unit tests for the distillation protocol'

import json

import numpy as np
import pytest

from orderloss import distill
from orderloss.coupled_basis import build_basis, degeneracy, label_swap_unitary, sector_projector
from orderloss.distill import (
    local_operator, target_state, enumerate_outcomes, average_yield, run_shot, monte_carlo,
    export_trace)
from orderloss.numkit import Operator, SizeGuardError, random_unitary
from orderloss.quantities import distillable_entanglement
from orderloss.states import SchmidtParam, closed_form_sigma


def test_two_pair_outcomes(max_entangled):
    outcomes = enumerate_outcomes(1, max_entangled)
    assert [(o.j, o.alpha_j, o.beta_j) for o in outcomes] == [(0, 1, 1), (1, 1, 1)]
    assert [o.probability for o in outcomes] == pytest.approx([0.25, 0.75])
    assert outcomes[0].yield_bits == pytest.approx(0., abs=1e-12)
    assert outcomes[1].yield_bits == pytest.approx(np.log2(3))
    assert average_yield(outcomes) == pytest.approx(0.75 * np.log2(3))


@pytest.mark.parametrize("alpha", [0.3, 0.6, 1 / np.sqrt(2)])
def test_four_pair_yield(alpha):
    s = SchmidtParam.from_alpha(alpha)
    outcomes = enumerate_outcomes(2, s)
    assert average_yield(outcomes) == pytest.approx(distillable_entanglement(2, s), abs=1e-9)

    spectrum = closed_form_sigma(2, s, materialize=False)
    assert len(outcomes) == sum(degeneracy(2, j) ** 2 for j in range(3))
    for outcome in outcomes:
        # Bob always finds Alice's sector and every branch of a sector is equally likely
        assert outcome.bob_j == outcome.j
        assert outcome.probability == pytest.approx(spectrum.probabilities[outcome.j],
                                                    abs=1e-10)
        assert outcome.discarded_fidelity == pytest.approx(1., abs=1e-10)
        assert outcome.yield_bits == pytest.approx(spectrum.entanglement_entropy(outcome.j),
                                                   abs=1e-10)


def test_final_states(partial):
    for outcome in enumerate_outcomes(2, partial):
        target = target_state(2, outcome.j, partial)
        assert outcome.final_state.n_qubits == 4 * outcome.j
        assert outcome.final_state.overlap_modulus(target) == pytest.approx(1., abs=1e-10)


def test_product_state_has_single_branch():
    outcomes = enumerate_outcomes(2, SchmidtParam.from_alpha(1.))
    assert len(outcomes) == 1
    assert outcomes[0].j == 2
    assert outcomes[0].yield_bits == pytest.approx(0., abs=1e-12)


def test_average_yield_needs_all_branches(max_entangled):
    outcomes = enumerate_outcomes(1, max_entangled)
    with pytest.raises(ValueError, match="sum to"):
        average_yield(outcomes[1:])


def test_local_operator():
    op = Operator(np.diag([1., -1.]), hermitian=True)
    assert local_operator(op, 'A', 1, 2).n_qubits == 3
    np.testing.assert_array_equal(np.diag(local_operator(op, 'B', 1, 1).entries).real,
                                  [1., -1., 1., -1.])
    with pytest.raises(ValueError, match="side"):
        local_operator(op, 'C', 1, 1)


def test_size_guard(partial):
    with pytest.raises(SizeGuardError, match="big override"):
        enumerate_outcomes(3, partial)


def test_run_shot_deterministic(partial):
    first_outcome, first = run_shot(2, partial, seed=7)
    second_outcome, second = run_shot(2, partial, seed=7)
    assert first.to_records() == second.to_records()
    assert (first_outcome.j, first_outcome.alpha_j, first_outcome.beta_j) == \
        (second_outcome.j, second_outcome.alpha_j, second_outcome.beta_j)
    assert [step.step for step in first.steps] == [
        "measure_alice", "unitary_alice", "discard_alice", "measure_bob", "unitary_bob",
        "final"]
    assert first.steps[-1].norm == pytest.approx(first_outcome.probability)
    assert all(f == pytest.approx(1., abs=1e-10) for f in first.steps[2].fidelities)


def test_run_shot_covers_sectors(max_entangled):
    sectors = {run_shot(1, max_entangled, seed)[0].j for seed in range(1, 40)}
    assert sectors == {0, 1}


def test_monte_carlo(partial):
    outcomes = enumerate_outcomes(2, partial)
    summary = monte_carlo(2, partial, 20000, seed=3, outcomes=outcomes)
    assert list(summary.columns) == ["j", "alpha_j", "beta_j", "probability", "yield_bits",
                                     "count", "frequency", "std_error", "z_score", "p_value"]
    assert summary["count"].sum() == 20000
    assert summary.frequency.sum() == pytest.approx(1.)
    # 20000 shots: 6 standard errors is far outside any plausible fluctuation
    assert np.all(np.abs(summary.z_score) < 6)
    assert summary.p_value.between(0, 1).all()

    again = monte_carlo(2, partial, 20000, seed=3, outcomes=outcomes, chunk_size=777)
    np.testing.assert_array_equal(summary["count"], again["count"])
    with pytest.raises(ValueError):
        monte_carlo(2, partial, 0, seed=3, outcomes=outcomes)


def test_export_trace(tmp_path, partial):
    _, trace = run_shot(1, partial, seed=11)
    filename = tmp_path / "trace.jsonl"
    export_trace(trace, str(filename))
    records = [json.loads(line) for line in filename.read_text().splitlines()]
    assert len(records) == len(trace.steps)
    assert {record["seed"] for record in records} == {11}
    assert records[0]["step"] == "measure_alice"


def test_protocol_operators_are_local(rng):
    basis = build_basis(2)
    sectors = [(j, a) for j in range(3) for a in range(1, degeneracy(2, j) + 1)]
    for j, a in sectors:
        for op in (sector_projector(basis, j, a), label_swap_unitary(basis, j, a)):
            other = random_unitary(16, rng)
            alice = local_operator(op, 'A', 4, 4).entries
            bob = local_operator(other, 'B', 4, 4).entries
            np.testing.assert_allclose(alice @ bob, bob @ alice, atol=1e-12)
            alice = local_operator(other, 'A', 4, 4).entries
            bob = local_operator(op, 'B', 4, 4).entries
            np.testing.assert_allclose(alice @ bob, bob @ alice, atol=1e-12)


def test_monte_carlo_sector_frequency(max_entangled):
    shots = 100000
    summary = monte_carlo(1, max_entangled, shots, seed=42)
    frequency = summary[summary.j == 1]["count"].sum() / shots
    assert abs(frequency - 0.75) <= 3 * np.sqrt(0.75 * 0.25 / shots)


def test_monte_carlo_follows_run_shot(partial):
    for seed in range(1, 8):
        outcome, _ = run_shot(1, partial, seed)
        summary = monte_carlo(1, partial, 1, seed)
        drawn = summary[summary["count"] == 1].iloc[0]
        assert (drawn.j, drawn.alpha_j, drawn.beta_j) == \
            (outcome.j, outcome.alpha_j, outcome.beta_j)


def test_monte_carlo_measures_the_state(monkeypatch, max_entangled):
    def unavailable(self, j, alpha_j):
        raise RuntimeError("measurement unavailable")

    monkeypatch.setattr(distill._Protocol, "alice_measure", unavailable)
    with pytest.raises(RuntimeError, match="unavailable"):
        monte_carlo(1, max_entangled, 10, seed=1, outcomes=[])
