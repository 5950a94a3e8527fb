"""
Coupled angular momentum basis |j, m, alpha> of 2J qubits.

Every qubit is a spin 1/2 with |1> = spin up, so m = (#ones - #zeros) / 2.
The basis is built by recursive Clebsch-Gordan coupling, adding one
qubit at a time. A coupling path is the sequence of intermediate total
spins. For each j the highest weight vectors of the paths are
orthonormalized with the representative

    |j, j> (x) [(|01> - |10>) / sqrt(2)] ** (J - j)

placed first, so alpha = 1 always labels the Dicke block followed by
singlets. Lower m values are generated with the total lowering
operator, which keeps phases consistent over a multiplet.
"""

__all__ = ["CoupledLabel", "CoupledBasis", "SpinOperators", "degeneracy", "dicke_block",
           "singlet", "representative", "spin_operators", "build_basis",
           "sector_projector", "label_swap_unitary"]
__date__ = "2024-03-13"
__license__ = "GPLv3"
__version__ = "1.0.0"

from functools import lru_cache
from typing import Dict, List, NamedTuple, Tuple, Optional

import numpy as np
import pandas
from scipy import sparse, special

from . import constants as const
from .numkit import StateVector, Operator, tensor, tensor_power, basis_ket, check_size
from .orderloss_utils.orderloss_logging import logger

# doubled intermediate spins 2j_1, 2j_2, ... of one coupling path
Path = Tuple[int, ...]


class CoupledLabel(NamedTuple):
    j: int
    m: int
    alpha: int


class SpinOperators(NamedTuple):
    """ total spin operators of an n qubit register (scipy.sparse csr) """
    sz: sparse.csr_matrix
    splus: sparse.csr_matrix
    sminus: sparse.csr_matrix
    s2: sparse.csr_matrix


def degeneracy(J: int, j: int) -> int:
    """
    multiplicity of total spin j among 2J qubits,
    d_j = (2j + 1) / (2J + 1) * C(2J + 1, J - j) in exact integer arithmetic
    """
    if not 0 <= j <= J:
        msg = f"degeneracy needs 0 <= j <= J, got j = {j}, J = {J}"
        logger.error(msg)
        raise ValueError(msg)
    numerator = (2 * j + 1) * special.comb(2 * J + 1, J - j, exact=True)
    d_j, remainder = divmod(numerator, 2 * J + 1)
    assert remainder == 0
    return d_j


def dicke_block(j: int, m: int) -> StateVector:
    """ symmetric state of 2j qubits with j + m ones """
    if not (j >= 0 and -j <= m <= j):
        msg = f"dicke_block needs |m| <= j, got j = {j}, m = {m}"
        logger.error(msg)
        raise ValueError(msg)
    n_qubits = 2 * j
    index = np.arange(2 ** n_qubits)
    weight = np.array([bin(i).count("1") for i in index])
    amplitudes = (weight == j + m).astype(complex)
    return StateVector(amplitudes / np.sqrt(special.comb(n_qubits, j + m, exact=True)))


def singlet() -> StateVector:
    """ (|01> - |10>) / sqrt(2) """
    return StateVector((basis_ket("01").amplitudes - basis_ket("10").amplitudes) / np.sqrt(2))


def representative(J: int, j: int, m: int) -> StateVector:
    """ |j, m> (x) singlet ** (J - j) on 2J qubits """
    block = dicke_block(j, m)
    if J == j:
        return block
    return tensor(block, tensor_power(singlet(), J - j))


@lru_cache(maxsize=None)
def spin_operators(n_qubits: int) -> SpinOperators:
    """ S_z, S_+, S_- and S^2 summed over n_qubits spins 1/2 """
    sz_1 = sparse.diags([-0.5, 0.5])
    # lowering maps |1> to |0>
    sminus_1 = sparse.csr_matrix(np.array([[0., 1.], [0., 0.]]))

    def embed(op, k):
        return sparse.kron(sparse.kron(sparse.identity(2 ** k), op),
                           sparse.identity(2 ** (n_qubits - k - 1)), format="csr")

    dim = 2 ** n_qubits
    sz = sparse.csr_matrix((dim, dim))
    sminus = sparse.csr_matrix((dim, dim))
    for k in range(n_qubits):
        sz = sz + embed(sz_1, k)
        sminus = sminus + embed(sminus_1, k)
    splus = sminus.T.tocsr()
    s2 = (sminus @ splus + sz @ sz + sz).tocsr()
    return SpinOperators(sz.tocsr(), splus, sminus.tocsr(), s2)


def _couple_qubit(multiplet: np.ndarray, tj: int, tj_new: int) -> np.ndarray:
    """
    couple a spin j multiplet (rows m = -j .. j) with one more qubit
    to total spin j_new = j +- 1/2 (doubled values tj, tj_new)
    """
    j = tj / 2
    up = np.array([0., 1.])
    down = np.array([1., 0.])
    dim = multiplet.shape[1] * 2
    rows = []
    for tm_new in range(-tj_new, tj_new + 1, 2):
        big_m = tm_new / 2
        vector = np.zeros(dim, dtype=complex)
        if tj_new == tj + 1:
            a_up = np.sqrt((j + big_m + 0.5) / (2 * j + 1))
            a_down = np.sqrt((j - big_m + 0.5) / (2 * j + 1))
        else:
            a_up = -np.sqrt((j - big_m + 0.5) / (2 * j + 1))
            a_down = np.sqrt((j + big_m + 0.5) / (2 * j + 1))
        # |j, M - 1/2> |1>
        if abs(tm_new - 1) <= tj:
            vector += a_up * np.kron(multiplet[(tm_new - 1 + tj) // 2], up)
        # |j, M + 1/2> |0>
        if abs(tm_new + 1) <= tj:
            vector += a_down * np.kron(multiplet[(tm_new + 1 + tj) // 2], down)
        rows.append(vector)
    return np.array(rows)


def coupling_paths(n_qubits: int) -> Dict[Path, np.ndarray]:
    """
    all coupling paths of n qubits

    Returns
    -------
    paths : dict
        doubled spin path -> array (2j + 1, 2**n_qubits), rows m = -j .. j
    """
    paths = {(1,): np.eye(2, dtype=complex)}
    for _ in range(n_qubits - 1):
        extended = {}
        for path, multiplet in paths.items():
            tj = path[-1]
            for tj_new in (tj + 1, tj - 1):
                if tj_new >= 0:
                    extended[path + (tj_new,)] = _couple_qubit(multiplet, tj, tj_new)
        paths = extended
    return paths


def _orthonormalize(vectors: List[np.ndarray], tol: float = const.DEPENDENCE_TOL
                    ) -> Tuple[List[np.ndarray], List[int]]:
    """
    modified Gram-Schmidt with one reorthogonalization;
    returns the kept vectors and their input positions
    """
    kept, positions = [], []
    for position, vector in enumerate(vectors):
        residual = np.array(vector, dtype=complex)
        for _ in range(2):
            for q in kept:
                residual = residual - np.vdot(q, residual) * q
        norm = np.linalg.norm(residual)
        if norm < tol:
            continue
        kept.append(residual / norm)
        positions.append(position)
    return kept, positions


class CoupledBasis:
    """
    Orthonormal basis {|j, m, alpha>} of 2J qubits.

    Attributes
    ----------
    J : int
    n_qubits : int
        2J
    vectors : dict
        CoupledLabel -> StateVector
    path_table : dict
        (j, alpha) -> coupling path (tuple of intermediate spins)
        whose highest weight vector produced alpha. For alpha = 1 it is the
        path replaced by the representative Dicke block (x) singlets.
    """

    def __init__(self, J: int, vectors: Dict[CoupledLabel, StateVector],
                 path_table: Dict[Tuple[int, int], Tuple[float, ...]]):
        self.J = J
        self.n_qubits = 2 * J
        self.vectors = vectors
        self.path_table = path_table
        self.labels: List[CoupledLabel] = sorted(vectors, key=lambda lab: (lab.j, lab.alpha, lab.m))
        self._matrix: Optional[np.ndarray] = None

    def __repr__(self):
        return f"CoupledBasis(J={self.J}, n_vectors={len(self.vectors)})"

    def __len__(self):
        return len(self.vectors)

    def degeneracy(self, j: int) -> int:
        return sum(1 for label in self.labels if label.j == j and label.m == j)

    def check_label(self, j: int, alpha: int, m: Optional[int] = None):
        if not 0 <= j <= self.J or not 1 <= alpha <= degeneracy(self.J, j) \
                or (m is not None and not -j <= m <= j):
            msg = f"invalid label j = {j}, alpha = {alpha}, m = {m} for J = {self.J}"
            logger.error(msg)
            raise ValueError(msg)

    def __getitem__(self, label: Tuple[int, int, int]) -> StateVector:
        label = CoupledLabel(*label)
        self.check_label(label.j, label.alpha, label.m)
        return self.vectors[label]

    def multiplet(self, j: int, alpha: int) -> np.ndarray:
        """ array (2j + 1, 2**(2J)) of |j, m, alpha>, rows m = -j .. j """
        self.check_label(j, alpha)
        return np.array([self.vectors[CoupledLabel(j, m, alpha)].amplitudes
                         for m in range(-j, j + 1)])

    def matrix(self) -> np.ndarray:
        """ unitary whose columns are the basis vectors in the order of self.labels """
        if self._matrix is None:
            matrix = np.array([self.vectors[label].amplitudes for label in self.labels]).T
            matrix.setflags(write=False)
            self._matrix = matrix
        return self._matrix

    def to_frame(self, tol: float = 1e-15) -> pandas.DataFrame:
        """ nonzero amplitudes as rows (j, m, alpha, index, re, im) """
        rows = []
        for label in self.labels:
            amplitudes = self.vectors[label].amplitudes
            for index in np.flatnonzero(np.abs(amplitudes) > tol):
                rows.append((label.j, label.m, label.alpha, int(index),
                             amplitudes[index].real, amplitudes[index].imag))
        return pandas.DataFrame(rows, columns=["j", "m", "alpha", "index", "re", "im"])

    def dump_csv(self, filename: str):
        logger.info(f"# write coupled basis of J = {self.J} to {filename!r}")
        self.to_frame().to_csv(filename, index=False, float_format=const.FLOAT_FORMAT)


@lru_cache(maxsize=None)
def build_basis(J: int) -> CoupledBasis:
    """
    Construct the coupled basis of 2J qubits.

    Parameters
    ----------
    J : int
        1 <= J <= 4

    Returns
    -------
    basis : CoupledBasis
    """
    if J < 1:
        msg = f"build_basis needs J >= 1, got {J}"
        logger.error(msg)
        raise ValueError(msg)
    check_size(J, const.BASIS_MAX_J, "build_basis")

    n_qubits = 2 * J
    sminus = spin_operators(n_qubits).sminus
    paths = coupling_paths(n_qubits)
    vectors = {}
    path_table = {}

    for j in range(J + 1):
        candidates = sorted(path for path in paths if path[-1] == 2 * j)
        highest = [paths[path][-1] for path in candidates]
        kept, positions = _orthonormalize([representative(J, j, j).amplitudes] + highest)
        replaced = sorted(set(range(1, len(candidates) + 1)) - set(positions))
        d_j = degeneracy(J, j)
        if len(kept) != d_j or len(replaced) != 1:
            msg = f"coupled basis construction failed for J = {J}, j = {j}: " \
                  f"{len(kept)} vectors, expected {d_j}"
            logger.critical(msg)
            raise RuntimeError(msg)

        origins = [replaced[0]] + positions[1:]
        for alpha, (top, origin) in enumerate(zip(kept, origins), start=1):
            path_table[(j, alpha)] = tuple(t / 2 for t in candidates[origin - 1])
            vector = StateVector(top).canonical_phase().amplitudes
            for m in range(j, -j - 1, -1):
                vectors[CoupledLabel(j, m, alpha)] = StateVector(vector)
                if m > -j:
                    vector = sminus @ vector / np.sqrt(j * (j + 1) - m * (m - 1))

    logger.debug(f"coupled basis of J = {J}: {len(vectors)} vectors")
    return CoupledBasis(J, vectors, path_table)


def sector_projector(basis: CoupledBasis, j: int, alpha: int) -> Operator:
    """ sum over m of |j, m, alpha><j, m, alpha| """
    multiplet = basis.multiplet(j, alpha)
    return Operator(multiplet.T @ multiplet.conj(), hermitian=True)


def label_swap_unitary(basis: CoupledBasis, j: int, alpha: int) -> Operator:
    """
    unitary exchanging |j, m, alpha> and |j, m, 1> for all m,
    identity on every other basis vector
    """
    basis.check_label(j, alpha)
    dim = 2 ** basis.n_qubits
    if alpha == 1:
        return Operator(np.eye(dim))
    target = basis.multiplet(j, alpha)
    first = basis.multiplet(j, 1)
    entries = np.eye(dim, dtype=complex) \
        - target.T @ target.conj() - first.T @ first.conj() \
        + first.T @ target.conj() + target.T @ first.conj()
    return Operator(entries, hermitian=True)
