"""
Dense complex linear algebra and entropy primitives.

States and operators live on qubit registers with computational basis
index b_0 b_1 ... b_{n-1} (qubit 0 is the most significant bit).
Bipartite registers are stored as [Alice qubits | Bob qubits];
the pair-interleaved labelling (A1 B1 A2 B2 ...) is converted with
interleaved_to_blocks / blocks_to_interleaved.

All logarithms are base 2.
"""

__all__ = [
    "StateVector", "Operator", "Spectrum",
    "InfiniteRelativeEntropyError", "SizeGuardError", "check_size",
    "tensor", "tensor_power", "partial_trace", "reduce_qubits", "hermitian_eig",
    "von_neumann_entropy", "shannon_entropy", "relative_entropy", "trace_distance",
    "fidelity_pure", "purity", "random_unitary", "permute_qubits", "permutation_index",
    "permutation_operator",
    "interleaved_to_blocks", "blocks_to_interleaved", "basis_ket", "interleaved_state",
    "use_eigensolver", "get_eigensolver",
    ]
__date__ = "2024-03-12"
__license__ = "GPLv3"
__version__ = "1.0.0"

from typing import Optional, Sequence, Union, Dict, Iterable

import numpy as np
from scipy import special

from . import constants as const
from .orderloss_utils.orderloss_logging import logger
from .orderloss_utils.get_subclass import get_subclass
from .orderloss_utils.orderloss_control import ModuleKwargs
from ._modules.eigensolver import Eigensolver


class InfiniteRelativeEntropyError(ArithmeticError):
    """ support of sigma is not contained in the support of rho """


class SizeGuardError(MemoryError):
    """ a brute-force computation would exceed the configured size """


def check_size(J: int, max_j: int, what: str, big: bool = False, big_max_j: int = None):
    """
    raise SizeGuardError if J exceeds max_j
    (or big_max_j if the big override is set).
    """
    limit = max_j
    if big and big_max_j is not None:
        limit = big_max_j
        if J > max_j:
            logger.warning(f"{what} with J = {J} uses {4 * J} qubit matrices of "
                           f"{(2 ** (4 * J)) ** 2 * 16 / 2 ** 30:.2f} GiB each")
    if J > limit:
        msg = f"{what} supports J <= {limit}, got J = {J}"
        if not big and big_max_j is not None and J <= big_max_j:
            msg += " (use the big override)"
        logger.error(msg)
        raise SizeGuardError(msg)


def _qubits_from_dim(dim: int) -> int:
    n_qubits = int(dim).bit_length() - 1
    if dim < 1 or 2 ** n_qubits != dim:
        msg = f"dimension {dim} is not a power of two"
        logger.error(msg)
        raise ValueError(msg)
    return n_qubits


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


class StateVector:
    """
    Ket on n qubits.

    Attributes
    ----------
    amplitudes : ndarray (2**n,) complex, read only
    n_qubits : int
    layout : tuple of str or None
        party label of each qubit ('A' or 'B'), None if unassigned
    """

    def __init__(self, amplitudes: Union[np.ndarray, Sequence[complex]],
                 layout: Optional[Sequence[str]] = None):
        self.amplitudes = _frozen(np.ravel(amplitudes))
        self.n_qubits = _qubits_from_dim(self.amplitudes.size)
        if layout is not None:
            layout = tuple(layout)
            if len(layout) != self.n_qubits:
                msg = f"layout {layout} does not match {self.n_qubits} qubits"
                logger.error(msg)
                raise ValueError(msg)
        self.layout = layout

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits}, layout={self.layout})"

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        norm = self.norm
        if norm == 0:
            msg = "can not normalize the zero vector"
            logger.error(msg)
            raise ValueError(msg)
        return StateVector(self.amplitudes / norm, self.layout)

    def inner(self, other: "StateVector") -> complex:
        """ <self|other> """
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def overlap_modulus(self, other: "StateVector") -> float:
        return abs(self.inner(other))

    def with_layout(self, layout: Optional[Sequence[str]]) -> "StateVector":
        return StateVector(self.amplitudes, layout)

    def canonical_phase(self, tol: float = 1e-12) -> "StateVector":
        """ multiply by a phase making the first nonzero amplitude real positive """
        nonzero = np.flatnonzero(np.abs(self.amplitudes) > tol)
        if nonzero.size == 0:
            return self
        first = self.amplitudes[nonzero[0]]
        return StateVector(self.amplitudes * (abs(first) / first), self.layout)

    def projector(self) -> "Operator":
        """ |psi><psi| """
        return Operator(np.outer(self.amplitudes, self.amplitudes.conj()), hermitian=True)


class Operator:
    """
    Operator on n qubits.

    Attributes
    ----------
    entries : ndarray (2**n, 2**n) complex, read only
    n_qubits : int
    hermitian : bool
        if set, the entries are checked and symmetrized on construction
    """

    def __init__(self, entries: np.ndarray, hermitian: bool = False):
        entries = np.array(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            msg = f"operator must be a square matrix, got shape {entries.shape}"
            logger.error(msg)
            raise ValueError(msg)
        self.n_qubits = _qubits_from_dim(entries.shape[0])
        if hermitian:
            deviation = np.max(np.abs(entries - entries.conj().T)) if entries.size else 0.
            if deviation >= const.HERMITIAN_TOL:
                msg = f"operator flagged hermitian deviates by {deviation:.3e}"
                logger.error(msg)
                raise ValueError(msg)
            entries = (entries + entries.conj().T) / 2
        self.entries = _frozen(entries)
        self.hermitian = hermitian

    def __repr__(self):
        return f"Operator(n_qubits={self.n_qubits}, hermitian={self.hermitian})"

    @classmethod
    def identity(cls, n_qubits: int) -> "Operator":
        return cls(np.eye(2 ** n_qubits), hermitian=True)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def dagger(self) -> "Operator":
        return Operator(self.entries.conj().T, hermitian=self.hermitian)

    def conjugate_by(self, unitary: "Operator") -> "Operator":
        """ U rho U^dagger """
        u = unitary.entries
        out = u @ self.entries @ u.conj().T
        if self.hermitian:
            out = (out + out.conj().T) / 2
        return Operator(out, hermitian=self.hermitian)

    def apply(self, psi: StateVector) -> StateVector:
        return StateVector(self.entries @ psi.amplitudes, psi.layout)

    def expectation(self, psi: StateVector) -> complex:
        return complex(np.vdot(psi.amplitudes, self.entries @ psi.amplitudes))

    def check_density(self, name: str = "operator"):
        """ raise ValueError if this is not hermitian with unit trace """
        if not self.hermitian:
            msg = f"{name} is not flagged hermitian"
            logger.error(msg)
            raise ValueError(msg)
        trace = self.trace().real
        if abs(trace - 1) > const.TRACE_TOL:
            msg = f"{name} has trace {trace:.15f}, not a density operator"
            logger.error(msg)
            raise ValueError(msg)


class Spectrum:
    """
    Eigendecomposition H = V diag(eigenvalues) V^dagger.

    Attributes
    ----------
    eigenvalues : ndarray real, ascending
    eigenvectors : ndarray complex, orthonormal columns
    """

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvalues.setflags(write=False)
        self.eigenvectors = _frozen(eigenvectors)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def clamped(self, name: str = "operator") -> np.ndarray:
        """
        eigenvalues with roundoff negatives in [-1e-10, 0] set to 0.
        more negative values raise ValueError.
        """
        values = np.array(self.eigenvalues)
        if values.size and values.min() < -const.NEGATIVE_EIG_TOL:
            msg = f"{name} has negative eigenvalue {values.min():.3e}, not a density operator"
            logger.error(msg)
            raise ValueError(msg)
        values[values < 0] = 0.
        return values


# ---------------------------------------------------------------- eigensolver

_eigensolver: Optional[Eigensolver] = None


def use_eigensolver(eigensolver_kwargs: Union[ModuleKwargs, dict, None] = None) -> Eigensolver:
    """ select the eigensolver used by hermitian_eig (default: Jacobi) """
    global _eigensolver
    if eigensolver_kwargs is None:
        eigensolver_kwargs = {"name": "Jacobi"}
    _eigensolver = get_subclass(Eigensolver, eigensolver_kwargs)
    return _eigensolver


def get_eigensolver() -> Eigensolver:
    if _eigensolver is None:
        return use_eigensolver()
    return _eigensolver


# ---------------------------------------------------------------- operations

def tensor(a, b):
    """
    Tensor product a (x) b of two StateVectors or two Operators.
    The qubits of a come first.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        layout = None
        if a.layout is not None and b.layout is not None:
            layout = a.layout + b.layout
        return StateVector(np.kron(a.amplitudes, b.amplitudes), layout)
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.entries, b.entries), hermitian=a.hermitian and b.hermitian)
    msg = f"tensor needs two objects of the same kind, got {type(a).__name__} " \
          f"and {type(b).__name__}"
    logger.error(msg)
    raise TypeError(msg)


def tensor_power(a, n: int):
    """ a (x) a (x) ... (n times), n >= 1 """
    out = a
    for _ in range(n - 1):
        out = tensor(out, a)
    return out


def partial_trace(rho: Operator, subsystem_dims: Sequence[int], keep: Iterable[int]) -> Operator:
    """
    Trace out all subsystems not in keep.

    Parameters
    ----------
    rho : Operator
    subsystem_dims : list of int
        dimensions of the subsystems, their product must equal rho.dim
    keep : iterable of int
        indices of the kept subsystems; the kept order follows subsystem_dims

    Returns
    -------
    reduced : Operator
    """
    dims = [int(d) for d in subsystem_dims]
    if int(np.prod(dims)) != rho.dim:
        msg = f"subsystem dimensions {dims} do not match operator dimension {rho.dim}"
        logger.error(msg)
        raise ValueError(msg)
    keep = sorted(set(keep))
    if any(not 0 <= k < len(dims) for k in keep):
        msg = f"keep {keep} out of range for {len(dims)} subsystems"
        logger.error(msg)
        raise ValueError(msg)

    traced = [k for k in range(len(dims)) if k not in keep]
    n_sub = len(dims)
    dim_keep = int(np.prod([dims[k] for k in keep]))
    dim_trace = int(np.prod([dims[k] for k in traced]))

    tensor_ = rho.entries.reshape(dims + dims)
    axes = keep + traced
    tensor_ = tensor_.transpose(axes + [n_sub + k for k in axes])
    tensor_ = tensor_.reshape(dim_keep, dim_trace, dim_keep, dim_trace)
    reduced = np.trace(tensor_, axis1=1, axis2=3)
    return Operator(reduced, hermitian=rho.hermitian)


def reduce_qubits(rho: Operator, keep: Iterable[int]) -> Operator:
    """ partial trace on a qubit register, keeping the listed qubits """
    return partial_trace(rho, [2] * rho.n_qubits, keep)


def hermitian_eig(h: Operator) -> Spectrum:
    """ eigendecomposition of an operator flagged hermitian """
    if not h.hermitian:
        msg = "hermitian_eig needs an operator flagged hermitian"
        logger.error(msg)
        raise ValueError(msg)
    eigenvalues, eigenvectors = get_eigensolver().decompose(np.array(h.entries))
    return Spectrum(eigenvalues, eigenvectors)


def shannon_entropy(probabilities: np.ndarray) -> float:
    """ -sum p log2 p with 0 log 0 = 0 """
    probabilities = np.asarray(probabilities, dtype=float)
    return float(np.sum(special.entr(probabilities)) / const.LN2)


def von_neumann_entropy(rho: Operator) -> float:
    """ S(rho) = -tr rho log2 rho in bits """
    rho.check_density("rho")
    values = hermitian_eig(rho).clamped("rho")
    return shannon_entropy(values)


def relative_entropy(sigma: Operator, rho: Operator) -> float:
    """
    S(sigma||rho) = tr sigma log2 sigma - tr sigma log2 rho in bits.

    Raises
    ------
    InfiniteRelativeEntropyError
        if an eigenvector of sigma with weight > 1e-12 leaks out of the support of rho
    """
    sigma.check_density("sigma")
    rho.check_density("rho")
    if sigma.dim != rho.dim:
        msg = f"dimension mismatch: sigma {sigma.dim}, rho {rho.dim}"
        logger.error(msg)
        raise ValueError(msg)

    spec_s = hermitian_eig(sigma)
    spec_r = hermitian_eig(rho)
    ls = spec_s.clamped("sigma")
    lr = spec_r.clamped("rho")

    support = ls > const.SUPPORT_TOL
    ls = ls[support]
    # |<v_k|w_i>|^2 between eigenvectors of sigma (k) and rho (i)
    overlap = np.abs(spec_s.eigenvectors[:, support].conj().T @ spec_r.eigenvectors) ** 2
    null = lr <= const.SUPPORT_TOL
    leak = ls * overlap[:, null].sum(axis=1)
    if np.any(leak > const.SUPPORT_TOL):
        msg = f"support of sigma is not contained in the support of rho " \
              f"(leaked weight {leak.max():.3e}): infinite relative entropy"
        logger.error(msg)
        raise InfiniteRelativeEntropyError(msg)

    log_r = np.zeros_like(lr)
    log_r[~null] = np.log2(lr[~null])
    tr_s_log_s = float(np.sum(ls * np.log2(ls)))
    tr_s_log_r = float(np.sum(ls[:, None] * overlap * log_r[None, :]))
    return max(tr_s_log_s - tr_s_log_r, 0.)


def trace_distance(a: Operator, b: Operator) -> float:
    """ (1/2) ||a - b||_1 """
    if a.dim != b.dim:
        msg = f"dimension mismatch: {a.dim} and {b.dim}"
        logger.error(msg)
        raise ValueError(msg)
    difference = Operator(a.entries - b.entries, hermitian=True)
    return float(np.sum(np.abs(hermitian_eig(difference).eigenvalues)) / 2)


def fidelity_pure(psi: StateVector, rho: Operator) -> float:
    """ <psi|rho|psi> """
    return float(rho.expectation(psi).real)


def purity(rho: Operator) -> float:
    """ tr rho^2 """
    return float(np.real(np.sum(rho.entries * rho.entries.T)))


def random_unitary(dim: int, rng: np.random.Generator) -> Operator:
    """ Haar random unitary from the QR decomposition of a complex Gaussian matrix """
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return Operator(q * (diag / np.abs(diag)))


def permute_qubits(psi: StateVector, perm: Sequence[int]) -> StateVector:
    """
    Move qubit i to position perm[i].

    permute_qubits(permute_qubits(psi, p1), p2) == permute_qubits(psi, p2[p1])
    """
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(psi.n_qubits)):
        msg = f"{perm.tolist()} is not a permutation of {psi.n_qubits} qubits"
        logger.error(msg)
        raise ValueError(msg)
    amplitudes = psi.amplitudes.reshape([2] * psi.n_qubits)
    # output axis k holds input axis perm^-1[k]
    amplitudes = np.transpose(amplitudes, np.argsort(perm)).reshape(-1)
    layout = None
    if psi.layout is not None:
        layout = tuple(psi.layout[i] for i in np.argsort(perm))
    return StateVector(amplitudes, layout)


def permutation_index(n_qubits: int, perm: Sequence[int]) -> np.ndarray:
    """
    index map of the qubit permutation: permuted amplitudes are amplitudes[index]
    """
    index = np.arange(2 ** n_qubits).reshape([2] * n_qubits)
    return np.transpose(index, np.argsort(perm)).reshape(-1)


def permutation_operator(n_qubits: int, perm: Sequence[int]) -> Operator:
    """ unitary P with P psi = permute_qubits(psi, perm) """
    index = permutation_index(n_qubits, perm)
    entries = np.zeros((2 ** n_qubits, 2 ** n_qubits))
    entries[np.arange(index.size), index] = 1.
    return Operator(entries)


def interleaved_to_blocks(psi: StateVector) -> StateVector:
    """
    Reorder qubits into [Alice | Bob] blocks keeping the order within each party.
    A state without layout is read as pair interleaved (A1 B1 A2 B2 ...).
    """
    layout = psi.layout
    if layout is None:
        layout = ('A', 'B') * (psi.n_qubits // 2)
        psi = psi.with_layout(layout)
    order = [i for i, party in enumerate(layout) if party == 'A'] \
        + [i for i, party in enumerate(layout) if party != 'A']
    perm = np.argsort(order)
    return permute_qubits(psi, perm)


def blocks_to_interleaved(psi: StateVector) -> StateVector:
    """ inverse of interleaved_to_blocks for a [Alice | Bob] register of N pairs """
    n_pairs = psi.n_qubits // 2
    # block position k: Alice k -> 2k, Bob k -> 2k + 1
    perm = [2 * k for k in range(n_pairs)] + [2 * k + 1 for k in range(n_pairs)]
    return permute_qubits(psi.with_layout(('A',) * n_pairs + ('B',) * n_pairs), perm)


def basis_ket(bits: str, layout: Optional[Sequence[str]] = None) -> StateVector:
    """ computational basis state |bits> """
    amplitudes = np.zeros(2 ** len(bits), dtype=complex)
    amplitudes[int(bits, 2) if bits else 0] = 1.
    return StateVector(amplitudes, layout)


def interleaved_state(terms: Dict[str, complex], normalize: bool = True) -> StateVector:
    """
    Build sum_k c_k |bits_k> written in the pair-interleaved labelling
    (qubits 1, 3, ... belong to Alice, 2, 4, ... to Bob)
    and return it in [Alice | Bob] layout.
    """
    n_qubits = len(next(iter(terms)))
    amplitudes = np.zeros(2 ** n_qubits, dtype=complex)
    for bits, coefficient in terms.items():
        amplitudes[int(bits, 2)] += coefficient
    psi = StateVector(amplitudes, ('A', 'B') * (n_qubits // 2))
    if normalize:
        psi = psi.normalize()
    return interleaved_to_blocks(psi)
