"""
Simulation of the distillation protocol on the shuffled pairs.

1. Alice measures the sectors (j, alpha_j) of her 2J qubits.
2. She rotates alpha_j to the representative label 1.
3. Her trailing 2(J - j) qubits are then singlets and are discarded.
4. Bob measures the sectors (k, beta_k) of his qubits; k = j always.
5. He rotates beta_k to 1 and discards his trailing 2(J - k) qubits.
6. The remaining 2j + 2j qubits hold sum_m c_m |j, m>|j, m>, worth
   its entanglement entropy in ebits (asymptotically).

Branches are enumerated exhaustively or sampled with Philox
generators, one stream for each party spawned from SeedSequence(seed).
"""

__all__ = ["TraceStep", "ProtocolTrace", "ProtocolOutcome", "local_operator", "target_state",
           "enumerate_outcomes", "average_yield", "run_shot", "monte_carlo", "export_trace"]
__date__ = "2024-03-18"
__license__ = "GPLv3"
__version__ = "1.0.0"

from typing import List, Optional, Tuple

import numpy as np
import pandas
from pydantic import BaseModel
from scipy import stats
from tqdm import tqdm

from . import constants as const
from .coupled_basis import (CoupledBasis, build_basis, degeneracy, dicke_block, singlet,
                            sector_projector, label_swap_unitary)
from .numkit import (StateVector, Operator, check_size, tensor, reduce_qubits, hermitian_eig,
                     von_neumann_entropy, fidelity_pure)
from .states import (SchmidtParam, initial_state, shuffle_channel, closed_form_sigma,
                     assemble_operator, block_coefficients)
from .orderloss_utils.orderloss_logging import logger
from .orderloss_utils.output_writer import write_json_lines


class TraceStep(BaseModel):
    step: str
    label: str
    norm: float
    discarded: Tuple[int, ...] = ()
    fidelities: Tuple[float, ...] = ()


class ProtocolTrace(BaseModel):
    """ ordered log of one protocol run """
    J: int
    alpha: float
    seed: Optional[int] = None
    steps: List[TraceStep] = []

    def to_records(self) -> List[dict]:
        return [{"J": self.J, "alpha": self.alpha, "seed": self.seed, **step.dict()}
                for step in self.steps]


class ProtocolOutcome(BaseModel):
    """
    one branch (j, alpha_j, beta_j) of the protocol;
    bob_j is the sector found by Bob
    """
    j: int
    alpha_j: int
    beta_j: int
    bob_j: int
    probability: float
    final_state: StateVector
    yield_bits: float
    # smallest singlet fidelity of the pairs discarded by Alice
    discarded_fidelity: float = 1.0

    class Config:
        arbitrary_types_allowed = True


def local_operator(op: Operator, side: str, n_alice: int, n_bob: int) -> Operator:
    """ op (x) I_B for side 'A', I_A (x) op for side 'B' """
    if side == 'A':
        return tensor(op, Operator.identity(n_bob))
    if side == 'B':
        return tensor(Operator.identity(n_alice), op)
    msg = f"side must be 'A' or 'B', got {side!r}"
    logger.error(msg)
    raise ValueError(msg)


def target_state(J: int, j: int, s: SchmidtParam) -> StateVector:
    """ normalized sum_m c_m |j, m>_A |j, m>_B on 2j + 2j qubits """
    coefficients = block_coefficients(J, j, s)
    amplitudes = sum(c * np.kron(dicke_block(j, m).amplitudes, dicke_block(j, m).amplitudes)
                     for c, m in zip(coefficients, range(-j, j + 1)))
    return StateVector(amplitudes, ('A',) * (2 * j) + ('B',) * (2 * j)).normalize()


def _measure(rho: Operator, projector: Operator) -> Tuple[float, Optional[Operator]]:
    """ Born probability and normalized post-measurement state """
    entries = projector.entries @ rho.entries @ projector.entries
    entries = (entries + entries.conj().T) / 2
    probability = float(np.real(np.trace(entries)))
    if probability <= const.BRANCH_TOL:
        return max(probability, 0.), None
    return probability, Operator(entries / probability, hermitian=True)


class _Protocol:
    """ shuffled state and local operations of one (J, s) """

    def __init__(self, J: int, s: SchmidtParam, big: bool = False):
        check_size(J, const.BRUTE_FORCE_MAX_J, "distillation protocol", big, const.BIG_MAX_J)
        self.J = J
        self.s = s
        self.n_side = 2 * J
        self.basis: CoupledBasis = build_basis(J)
        if J <= const.BRUTE_FORCE_MAX_J:
            self.sigma = shuffle_channel(initial_state(J, s).projector(), J)
        else:
            self.sigma = assemble_operator(closed_form_sigma(J, s, materialize=True, big=big),
                                           big=big)
        self.sectors = [(j, a) for j in range(J + 1) for a in range(1, degeneracy(J, j) + 1)]

    def alice_measure(self, j: int, alpha_j: int) -> Tuple[float, Optional[Operator]]:
        projector = local_operator(sector_projector(self.basis, j, alpha_j), 'A',
                                   self.n_side, self.n_side)
        return _measure(self.sigma, projector)

    def alice_prepare(self, rho: Operator, j: int, alpha_j: int
                      ) -> Tuple[Operator, Tuple[int, ...], Tuple[float, ...]]:
        """ rotate alpha_j to 1, check and discard the trailing singlets """
        unitary = local_operator(label_swap_unitary(self.basis, j, alpha_j), 'A',
                                 self.n_side, self.n_side)
        rho = rho.conjugate_by(unitary)
        discarded = tuple(range(2 * j, self.n_side))
        fidelities = tuple(
            fidelity_pure(singlet(), reduce_qubits(rho, [q, q + 1]))
            for q in discarded[::2])
        keep = list(range(2 * j)) + list(range(self.n_side, 2 * self.n_side))
        return reduce_qubits(rho, keep), discarded, fidelities

    def bob_measure(self, rho: Operator, j: int, k: int, beta_k: int
                    ) -> Tuple[float, Optional[Operator]]:
        projector = local_operator(sector_projector(self.basis, k, beta_k), 'B',
                                   2 * j, self.n_side)
        return _measure(rho, projector)

    def bob_prepare(self, rho: Operator, j: int, k: int, beta_k: int
                    ) -> Tuple[Operator, Tuple[int, ...]]:
        unitary = local_operator(label_swap_unitary(self.basis, k, beta_k), 'B',
                                 2 * j, self.n_side)
        rho = rho.conjugate_by(unitary)
        discarded = tuple(range(2 * j + 2 * k, 2 * j + self.n_side))
        return reduce_qubits(rho, range(2 * j + 2 * k)), discarded

    def outcome(self, rho: Operator, j: int, alpha_j: int, k: int, beta_k: int,
                probability: float) -> ProtocolOutcome:
        spectrum = hermitian_eig(rho)
        top = StateVector(spectrum.eigenvectors[:, -1], ('A',) * (2 * j) + ('B',) * (2 * k))
        final_state = top.canonical_phase()
        if spectrum.eigenvalues[-1] < 1 - 1e-9:
            logger.warning(f"final state of branch (j={j}, alpha={alpha_j}, beta={beta_k}) "
                           f"is mixed, largest eigenvalue {spectrum.eigenvalues[-1]:.12g}")
        yield_bits = von_neumann_entropy(reduce_qubits(final_state.projector(), range(2 * j)))
        return ProtocolOutcome(j=j, alpha_j=alpha_j, beta_j=beta_k, bob_j=k,
                               probability=probability, final_state=final_state,
                               yield_bits=yield_bits)


def _enumerate(protocol: _Protocol) -> List[ProtocolOutcome]:
    outcomes = []
    for j, alpha_j in protocol.sectors:
        p_alice, rho = protocol.alice_measure(j, alpha_j)
        if rho is None:
            continue
        rho, _, fidelities = protocol.alice_prepare(rho, j, alpha_j)
        for k, beta_k in protocol.sectors:
            p_bob, post = protocol.bob_measure(rho, j, k, beta_k)
            if post is None or p_alice * p_bob <= const.BRANCH_TOL:
                continue
            if k != j:
                logger.warning(f"Bob found sector k = {k} after Alice found j = {j} "
                               f"with probability {p_alice * p_bob:.3e}")
            final, _ = protocol.bob_prepare(post, j, k, beta_k)
            outcome = protocol.outcome(final, j, alpha_j, k, beta_k, p_alice * p_bob)
            outcome.discarded_fidelity = min(fidelities, default=1.0)
            outcomes.append(outcome)
    logger.log(15, f"protocol J = {protocol.J}, alpha = {protocol.s.alpha:.12g}: "
                   f"{len(outcomes)} branches")
    return outcomes


def enumerate_outcomes(J: int, s: SchmidtParam, big: bool = False) -> List[ProtocolOutcome]:
    """
    All branches with probability above 1e-12, in the order of
    Alice's sectors (j, alpha_j) and Bob's sectors (k, beta_k).
    """
    return _enumerate(_Protocol(J, s, big))


def average_yield(outcomes: List[ProtocolOutcome]) -> float:
    """ probability weighted mean of the branch yields in ebits """
    total = sum(outcome.probability for outcome in outcomes)
    if abs(total - 1) > const.PROBABILITY_SUM_TOL:
        msg = f"outcome probabilities sum to {total:.15f}, not 1"
        logger.error(msg)
        raise ValueError(msg)
    return float(sum(outcome.probability * outcome.yield_bits for outcome in outcomes))


def _streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """ independent Philox streams for Alice's and Bob's measurements """
    alice, bob = np.random.SeedSequence(seed).spawn(2)
    return (np.random.Generator(np.random.Philox(alice)),
            np.random.Generator(np.random.Philox(bob)))


def _sample(probabilities: np.ndarray, u: np.ndarray) -> np.ndarray:
    """ inverse CDF sampling of indices """
    cdf = np.cumsum(probabilities)
    cdf /= cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side='right'), len(probabilities) - 1)


def _born(branches: List[Tuple[float, Optional[Operator]]]) -> np.ndarray:
    return np.array([p if post is not None else 0. for p, post in branches])


def run_shot(J: int, s: SchmidtParam, seed: int, big: bool = False
             ) -> Tuple[ProtocolOutcome, ProtocolTrace]:
    """
    One run of the protocol with outcomes drawn by Born probabilities.
    Alice's and Bob's uniform numbers come from two Generator(Philox)
    streams spawned from SeedSequence(seed).
    """
    alice_rng, bob_rng = _streams(seed)
    protocol = _Protocol(J, s, big)
    trace = ProtocolTrace(J=J, alpha=s.alpha, seed=seed)

    alice = [protocol.alice_measure(j, a) for j, a in protocol.sectors]
    index = int(_sample(_born(alice), alice_rng.random()))
    j, alpha_j = protocol.sectors[index]
    norm, rho = alice[index]
    trace.steps.append(TraceStep(step="measure_alice", label=f"P(j={j},alpha={alpha_j})",
                                 norm=norm))

    rho, discarded, fidelities = protocol.alice_prepare(rho, j, alpha_j)
    trace.steps.append(TraceStep(step="unitary_alice", label=f"U(j={j},alpha={alpha_j})",
                                 norm=norm))
    trace.steps.append(TraceStep(step="discard_alice", label="singlets", norm=norm,
                                 discarded=discarded, fidelities=fidelities))

    bob = [protocol.bob_measure(rho, j, k, b) for k, b in protocol.sectors]
    index = int(_sample(_born(bob), bob_rng.random()))
    k, beta_k = protocol.sectors[index]
    p_bob, post = bob[index]
    norm *= p_bob
    trace.steps.append(TraceStep(step="measure_bob", label=f"P(j={k},beta={beta_k})",
                                 norm=norm))

    final, discarded = protocol.bob_prepare(post, j, k, beta_k)
    trace.steps.append(TraceStep(step="unitary_bob", label=f"U(j={k},beta={beta_k})",
                                 norm=norm, discarded=discarded))
    outcome = protocol.outcome(final, j, alpha_j, k, beta_k, norm)
    trace.steps.append(TraceStep(step="final", label=f"yield={outcome.yield_bits:.12g}",
                                 norm=norm))
    return outcome, trace


def _measurement_tables(protocol: _Protocol) -> Tuple[np.ndarray, np.ndarray]:
    """
    Born probabilities of Alice's sectors and, per Alice sector, the
    conditional probabilities of Bob's sectors after her preparation
    """
    n = len(protocol.sectors)
    alice = np.zeros(n)
    bob = np.zeros((n, n))
    for a, (j, alpha_j) in enumerate(protocol.sectors):
        p_alice, rho = protocol.alice_measure(j, alpha_j)
        if rho is None:
            continue
        alice[a] = p_alice
        rho, _, _ = protocol.alice_prepare(rho, j, alpha_j)
        bob[a] = _born([protocol.bob_measure(rho, j, k, b) for k, b in protocol.sectors])
    return alice, bob


def monte_carlo(J: int, s: SchmidtParam, shots: int, seed: int,
                outcomes: Optional[List[ProtocolOutcome]] = None, big: bool = False,
                progress: bool = False, chunk_size: int = 10000) -> pandas.DataFrame:
    """
    Repeat the two measurement stages of run_shot for shots runs.

    The Born probabilities are measured once on the shuffled state;
    every shot then draws Alice's sector and Bob's sector conditional on
    it from the same streams as run_shot, so the first shot of a seed
    is the branch of run_shot(J, s, seed). The counts do not depend on
    chunk_size.

    Parameters
    ----------
    outcomes : list of ProtocolOutcome, optional
        enumerated branches, used for the yields only

    Returns
    -------
    summary : DataFrame
        per branch (j, alpha_j, beta_j): probability, yield, count,
        frequency, standard error of the frequency, z score and the
        two-sided binomial p value
    """
    if shots < 1:
        msg = f"shots must be >= 1, got {shots}"
        logger.error(msg)
        raise ValueError(msg)
    protocol = _Protocol(J, s, big)
    alice, bob = _measurement_tables(protocol)
    if outcomes is None:
        outcomes = _enumerate(protocol)
    yields = {(o.j, o.alpha_j, o.bob_j, o.beta_j): o.yield_bits for o in outcomes}

    alice_rng, bob_rng = _streams(seed)
    n = len(protocol.sectors)
    counts = np.zeros((n, n), dtype=int)
    n_chunks = -(-shots // chunk_size)
    for chunk in tqdm(range(n_chunks), desc="shots", disable=not progress):
        size = min(chunk_size, shots - chunk * chunk_size)
        first = _sample(alice, alice_rng.random(size))
        u_bob = bob_rng.random(size)
        second = np.empty(size, dtype=int)
        for a in np.unique(first):
            mask = first == a
            second[mask] = _sample(bob[a], u_bob[mask])
        np.add.at(counts, (first, second), 1)

    probabilities = alice[:, None] * bob
    rows = []
    for a, (j, alpha_j) in enumerate(protocol.sectors):
        for b, (k, beta_k) in enumerate(protocol.sectors):
            if probabilities[a, b] <= const.BRANCH_TOL and counts[a, b] == 0:
                continue
            if k != j:
                logger.warning(f"sampled Bob sector k = {k} after Alice sector j = {j}")
            rows.append({"j": j, "alpha_j": alpha_j, "beta_j": beta_k,
                         "probability": probabilities[a, b],
                         "yield_bits": yields.get((j, alpha_j, k, beta_k), np.nan),
                         "count": counts[a, b]})
    summary = pandas.DataFrame(rows)
    summary["frequency"] = summary["count"] / shots
    summary["std_error"] = np.sqrt(summary.probability * (1 - summary.probability) / shots)
    difference = (summary.frequency - summary.probability).to_numpy()
    std_error = summary.std_error.to_numpy()
    summary["z_score"] = np.divide(difference, std_error, out=np.zeros(len(summary)),
                                   where=std_error > 0)
    summary["p_value"] = [stats.binomtest(int(count), shots, min(max(p, 0.), 1.)).pvalue
                          for count, p in zip(summary["count"], summary.probability)]
    logger.log(15, f"{shots} shots, smallest binomial p value {summary.p_value.min():.3g}")
    return summary


def export_trace(trace: ProtocolTrace, filename: str) -> str:
    """ write the trace as line delimited json records """
    logger.info(f"# write protocol trace to {filename!r}")
    return write_json_lines(trace.to_records(), filename)
