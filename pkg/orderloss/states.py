"""
Initial states of N = 2J pairs, the channel losing the order of Bob's
qubits, and the closed-form block decomposition of its output

    sigma = sum_j sum_{alpha_j, beta_j} p_j |psi_j(alpha_j, beta_j)><psi_j(alpha_j, beta_j)|

with normalized block states

    |psi_j(a, b)> ~ sum_m alpha**(j - m) beta**(j + m) |j, m, a>_A |j, m, b>_B.
"""

__all__ = ["SchmidtParam", "BlockEntry", "BlockSpectrum", "CQState",
           "initial_state", "permute_bob", "shuffle_channel", "sector_probabilities",
           "block_coefficients", "block_state", "closed_form_sigma", "assemble_operator",
           "alice_reduction_invariance", "cq_joint_state", "mutual_information"]
__date__ = "2024-03-14"
__license__ = "GPLv3"
__version__ = "1.0.0"

import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, validator
from tqdm import tqdm

from . import constants as const
from .coupled_basis import build_basis, degeneracy
from .numkit import (StateVector, Operator, SizeGuardError, check_size, permute_qubits,
                     permutation_index, reduce_qubits, shannon_entropy, trace_distance,
                     von_neumann_entropy)
from .orderloss_utils.orderloss_logging import logger


class SchmidtParam(BaseModel):
    """
    Schmidt coefficients of one pair alpha|00> + beta|11>.
    alpha_sq is stored, so alpha**2 + beta**2 = alpha_sq + (1 - alpha_sq).
    """
    alpha_sq: float

    class Config:
        frozen = True

    @validator('alpha_sq')
    def check_weight(cls, value):
        if not 0 <= value <= 1:
            raise ValueError(f"alpha**2 must be in [0, 1], got {value}")
        return float(value)

    @classmethod
    def from_alpha(cls, alpha: float) -> "SchmidtParam":
        if not 0 <= alpha <= 1:
            msg = f"alpha must be in [0, 1], got {alpha}"
            logger.error(msg)
            raise ValueError(msg)
        return cls(alpha_sq=float(alpha) ** 2)

    @classmethod
    def from_alpha_sq(cls, alpha_sq: Union[str, float, Fraction]) -> "SchmidtParam":
        """ exact rational weights like "1/2" or "9/25" """
        return cls(alpha_sq=float(Fraction(alpha_sq)))

    @property
    def beta_sq(self) -> float:
        return 1. - self.alpha_sq

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)

    @property
    def beta(self) -> float:
        return math.sqrt(self.beta_sq)


class BlockEntry(BaseModel):
    j: int
    alpha_j: int
    beta_j: int
    probability: float
    block_state: Optional[StateVector] = None

    class Config:
        arbitrary_types_allowed = True


class BlockSpectrum(BaseModel):
    """
    Closed-form decomposition of the shuffled state.

    Attributes
    ----------
    J : int
    schmidt : SchmidtParam
    probabilities : dict
        j -> p_j, probability of each (alpha_j, beta_j) block with spin j
    coefficients : dict
        j -> normalized Schmidt coefficients of the block state, m = -j .. j
    entries : list of BlockEntry
        one per (j, alpha_j, beta_j) with its block state,
        empty unless materialized (there are sum_j d_j**2 of them)
    materialized : bool
    """
    J: int
    schmidt: SchmidtParam
    probabilities: Dict[int, float]
    coefficients: Dict[int, np.ndarray]
    entries: List[BlockEntry] = []
    materialized: bool = False

    class Config:
        arbitrary_types_allowed = True

    def entanglement_entropy(self, j: int) -> float:
        """ entropy of the Schmidt spectrum of a spin j block state """
        return shannon_entropy(self.coefficients[j] ** 2)

    def degeneracy(self, j: int) -> int:
        return degeneracy(self.J, j)


class CQState(BaseModel):
    """
    Joint state of the permutation record (ancilla) and the system.

    joint is block diagonal in the ancilla flags. It is only materialized
    for J = 1; for larger J the entropies follow from the classical-quantum
    identity S(joint) = log2(ancilla_dim) for pure branches.
    """
    J: int
    ancilla_dim: int
    system: Operator
    joint: Optional[Operator] = None

    class Config:
        arbitrary_types_allowed = True


def initial_state(J: int, s: SchmidtParam) -> StateVector:
    """
    (alpha|00> + beta|11>) ** (2J) in [Alice | Bob] layout.
    The amplitude of |x>_A |x>_B is alpha**(#zeros of x) * beta**(#ones of x).
    """
    if J < 1:
        msg = f"J must be >= 1, got {J}"
        logger.error(msg)
        raise ValueError(msg)
    n_pairs = 2 * J
    x = np.arange(2 ** n_pairs)
    ones = np.array([bin(i).count("1") for i in x])
    amplitudes = np.zeros(2 ** (2 * n_pairs), dtype=complex)
    amplitudes[(x << n_pairs) | x] = s.alpha ** (n_pairs - ones) * s.beta ** ones
    return StateVector(amplitudes, ('A',) * n_pairs + ('B',) * n_pairs).normalize()


def _bob_permutation(n_pairs: int, perm: Sequence[int]) -> List[int]:
    perm = list(perm)
    if sorted(perm) != list(range(n_pairs)):
        msg = f"{perm} is not a permutation of the {n_pairs} qubits of Bob"
        logger.error(msg)
        raise ValueError(msg)
    return list(range(n_pairs)) + [n_pairs + p for p in perm]


def permute_bob(psi: StateVector, perm: Sequence[int]) -> StateVector:
    """ move Bob's qubit i to position perm[i] within Bob's block """
    if psi.layout is not None and psi.layout != tuple(sorted(psi.layout)):
        msg = f"permute_bob needs [Alice | Bob] layout, got {psi.layout}"
        logger.error(msg)
        raise ValueError(msg)
    return permute_qubits(psi, _bob_permutation(psi.n_qubits // 2, perm))


def shuffle_channel(rho: Operator, J: int, big: bool = False) -> Operator:
    """
    uniform average of rho over all (2J)! permutations of Bob's qubits
    """
    n_pairs = 2 * J
    if rho.n_qubits != 2 * n_pairs:
        msg = f"shuffle_channel with J = {J} needs {2 * n_pairs} qubits, got {rho.n_qubits}"
        logger.error(msg)
        raise ValueError(msg)
    check_size(J, const.BRUTE_FORCE_MAX_J, "shuffle_channel", big, const.BIG_MAX_J)

    permutations = list(itertools.permutations(range(n_pairs)))
    entries = np.zeros_like(rho.entries)
    for perm in tqdm(permutations, desc="shuffle", disable=len(permutations) < 100):
        index = permutation_index(2 * n_pairs, _bob_permutation(n_pairs, perm))
        entries += rho.entries[np.ix_(index, index)]
    return Operator(entries / len(permutations), hermitian=rho.hermitian)


def sector_probabilities(J: int, s: SchmidtParam) -> Dict[int, float]:
    """
    p_j = sum_{m=-j..j} alpha**(2(J - m)) beta**(2(J + m)) / d_j
    """
    weights = {m: s.alpha_sq ** (J - m) * s.beta_sq ** (J + m) for m in range(-J, J + 1)}
    return {j: sum(weights[m] for m in range(-j, j + 1)) / degeneracy(J, j)
            for j in range(J + 1)}


def block_coefficients(J: int, j: int, s: SchmidtParam) -> np.ndarray:
    """
    normalized Schmidt coefficients of a spin j block, m = -j .. j;
    zeros if the block has no weight
    """
    m = np.arange(-j, j + 1)
    squares = s.alpha_sq ** (J - m) * s.beta_sq ** (J + m)
    total = squares.sum()
    if total == 0:
        return np.zeros(2 * j + 1)
    return np.sqrt(squares / total)


def block_state(J: int, j: int, alpha_j: int, beta_j: int, coefficients: np.ndarray
                ) -> StateVector:
    """ sum_m c_m |j, m, alpha_j>_A |j, m, beta_j>_B on 4J qubits """
    basis = build_basis(J)
    alice = basis.multiplet(j, alpha_j)
    bob = basis.multiplet(j, beta_j)
    amplitudes = np.einsum('m,ma,mb->ab', coefficients, alice, bob).reshape(-1)
    return StateVector(amplitudes, ('A',) * (2 * J) + ('B',) * (2 * J))


def closed_form_sigma(J: int, s: SchmidtParam, materialize: Optional[bool] = None,
                      big: bool = False) -> BlockSpectrum:
    """
    Block decomposition of the shuffled state.

    Parameters
    ----------
    J : int
        1 <= J <= 16
    s : SchmidtParam
    materialize : bool or None
        build the block states on 4J qubits; default: if J is within
        the brute-force range
    big : bool
        raise the brute-force range for materialize

    Returns
    -------
    spectrum : BlockSpectrum
    """
    if not 1 <= J <= const.CLOSED_FORM_MAX_J:
        msg = f"closed_form_sigma supports 1 <= J <= {const.CLOSED_FORM_MAX_J}, got {J}"
        logger.error(msg)
        raise (ValueError(msg) if J < 1 else SizeGuardError(msg))
    if materialize is None:
        materialize = J <= (const.BIG_MAX_J if big else const.BRUTE_FORCE_MAX_J)
    elif materialize:
        check_size(J, const.BRUTE_FORCE_MAX_J, "block states", big, const.BIG_MAX_J)

    probabilities = sector_probabilities(J, s)
    coefficients = {j: block_coefficients(J, j, s) for j in range(J + 1)}
    entries = []
    for j in range(J + 1 if materialize else 0):
        d_j = degeneracy(J, j)
        for alpha_j, beta_j in itertools.product(range(1, d_j + 1), repeat=2):
            state = None
            if probabilities[j] > 0:
                state = block_state(J, j, alpha_j, beta_j, coefficients[j])
            entries.append(BlockEntry(j=j, alpha_j=alpha_j, beta_j=beta_j,
                                      probability=probabilities[j], block_state=state))
    return BlockSpectrum(J=J, schmidt=s, probabilities=probabilities,
                         coefficients=coefficients, entries=entries, materialized=materialize)


def assemble_operator(b: BlockSpectrum, big: bool = False) -> Operator:
    """ sum of p |block><block| as a 4J qubit density operator """
    check_size(b.J, const.BRUTE_FORCE_MAX_J, "assemble_operator", big, const.BIG_MAX_J)
    if not b.materialized:
        b = closed_form_sigma(b.J, b.schmidt, materialize=True, big=big)
    used = [entry for entry in b.entries if entry.probability > 0]
    states = np.array([entry.block_state.amplitudes for entry in used])
    weights = np.array([entry.probability for entry in used])
    entries = (states.T * weights) @ states.conj()
    sigma = Operator(entries, hermitian=True)
    sigma.check_density("assembled sigma")
    return sigma


def alice_reduction_invariance(J: int, s: SchmidtParam, big: bool = False) -> float:
    """
    trace distance between Alice's reduced state before and after
    the shuffle channel
    """
    psi = initial_state(J, s)
    rho = psi.projector()
    sigma = shuffle_channel(rho, J, big)
    alice = range(2 * J)
    return trace_distance(reduce_qubits(rho, alice), reduce_qubits(sigma, alice))


def cq_joint_state(J: int, s: SchmidtParam, big: bool = False) -> CQState:
    """
    Classical-quantum state (1/|G|) sum_pi |pi><pi| (x) |psi_pi><psi_pi|
    of the permutation record and the shuffled pairs.
    """
    check_size(J, const.BRUTE_FORCE_MAX_J, "cq_joint_state", big, const.BIG_MAX_J)
    psi = initial_state(J, s)
    permutations = list(itertools.permutations(range(2 * J)))
    if J > 1:
        sigma = shuffle_channel(psi.projector(), J, big)
        return CQState(J=J, ancilla_dim=len(permutations), system=sigma)

    branches = [permute_bob(psi, perm).projector().entries for perm in permutations]
    dim = psi.dim
    joint = np.zeros((len(branches) * dim, len(branches) * dim), dtype=complex)
    for k, branch in enumerate(branches):
        joint[k * dim:(k + 1) * dim, k * dim:(k + 1) * dim] = branch / len(branches)
    joint = Operator(joint, hermitian=True)
    system = reduce_qubits(joint, range(1, joint.n_qubits))
    return CQState(J=J, ancilla_dim=len(branches), system=system, joint=joint)


def mutual_information(c: CQState) -> float:
    """ I(ancilla : system) = S(ancilla) + S(system) - S(joint) in bits """
    s_system = von_neumann_entropy(c.system)
    if c.joint is None:
        s_ancilla = s_joint = math.log2(c.ancilla_dim)
    else:
        n_ancilla = int(math.log2(c.ancilla_dim))
        s_ancilla = von_neumann_entropy(reduce_qubits(c.joint, range(n_ancilla)))
        s_joint = von_neumann_entropy(c.joint)
    return max(s_ancilla + s_system - s_joint, 0.)
