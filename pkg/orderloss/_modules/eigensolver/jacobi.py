"""
Cyclic Jacobi eigensolver for complex Hermitian matrices.

Each sweep visits every index pair (p, q) once. The pairs are grouped
into n - 1 rounds of disjoint pairs (round robin ordering), so that all
rotations of a round are applied at once. The ordering is fixed,
which makes the result reproducible bit for bit.
"""

__all__ = ['Jacobi']
__date__ = "2024-03-12"
__license__ = "GPLv3"
__version__ = "1.0.0"

from functools import lru_cache
from typing import Tuple, List

import numpy as np

from ._eigensolver import Eigensolver
from ... import constants as const
from ...orderloss_utils.orderloss_logging import logger


@lru_cache(maxsize=None)
def round_robin(n: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """
    Split all index pairs p < q of range(n) into rounds of disjoint pairs.

    Returns
    -------
    rounds : tuple of (p, q) index arrays
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds: List[Tuple[np.ndarray, np.ndarray]] = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        # drop the dummy player of odd n
        pairs = sorted((min(a, b), max(a, b)) for a, b in pairs if a < n and b < n)
        if pairs:
            p, q = np.array(pairs, dtype=int).T
            rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


class Jacobi(Eigensolver):
    """
    Jacobi subclass of the Eigensolver base class.

    Attributes
    ----------
    tol : float
        convergence when the off-diagonal Frobenius norm < tol * ||H||_F
    max_sweeps : int
        maximal number of sweeps before giving up
    """

    def __init__(self, tol: float = const.JACOBI_TOL, max_sweeps: int = const.JACOBI_MAX_SWEEPS,
                 **kwargs):
        super().__init__(**kwargs)
        self.eigensolver_name = 'jacobi'
        self.tol = tol
        self.max_sweeps = max_sweeps

    @staticmethod
    def off_diagonal_norm(a: np.ndarray) -> float:
        # explicit mask, the difference ||A||^2 - ||diag||^2 cancels catastrophically
        off = a.copy()
        np.fill_diagonal(off, 0.)
        return float(np.linalg.norm(off))

    def rotate(self, a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray,
               threshold: float) -> None:
        """
        Annihilate a[p, q] for a set of disjoint pairs (in place).

        The 2x2 rotation of a pair is W = D G with D = diag(1, exp(-i phi))
        removing the phase of a[p, q] and G the real Jacobi rotation.
        """
        apq = a[p, q]
        mag = np.abs(apq)
        active = mag > threshold
        if not np.any(active):
            return
        p, q, apq, mag = p[active], q[active], apq[active], mag[active]

        phase = apq / mag
        app = a[p, p].real
        aqq = a[q, q].real
        theta = (aqq - app) / (2. * mag)
        t = 1. / (np.abs(theta) + np.sqrt(theta ** 2 + 1.))
        t = np.where(theta < 0, -t, t)
        c = 1. / np.sqrt(t ** 2 + 1.)
        s = t * c
        cphase = np.conj(phase)

        # columns: A <- A W
        col_p = a[:, p].copy()
        col_q = a[:, q]
        a[:, p] = col_p * c - col_q * (s * cphase)
        a[:, q] = col_p * s + col_q * (c * cphase)
        # rows: A <- W^dagger A
        row_p = a[p, :].copy()
        row_q = a[q, :]
        a[p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
        a[q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
        # exact values of the rotated 2x2 blocks
        a[p, q] = 0.
        a[q, p] = 0.
        a[p, p] = app - t * mag
        a[q, q] = aqq + t * mag

        vec_p = v[:, p].copy()
        vec_q = v[:, q]
        v[:, p] = vec_p * c - vec_q * (s * cphase)
        v[:, q] = vec_p * s + vec_q * (c * cphase)

    def decompose(self, matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        a = np.array(matrix, dtype=complex, copy=True)
        n = a.shape[0]
        v = np.eye(n, dtype=complex)
        scale = float(np.linalg.norm(a))
        if n == 1 or scale == 0.:
            return np.real(np.diagonal(a)).copy(), v

        limit = self.tol * scale
        threshold = limit / n
        rounds = round_robin(n)

        off = self.off_diagonal_norm(a)
        sweep = 0
        while off > limit and sweep < self.max_sweeps:
            for p, q in rounds:
                self.rotate(a, v, p, q, threshold)
            off = self.off_diagonal_norm(a)
            sweep += 1

        if off > limit:
            if off > 1e4 * limit:
                msg = f"Jacobi method did not converge after {sweep} sweeps " \
                      f"(off-diagonal norm {off:.3e}, ||H|| = {scale:.3e})"
                logger.critical(msg)
                raise np.linalg.LinAlgError(msg)
            logger.warning(f"Jacobi method stopped at off-diagonal norm {off:.3e} "
                           f"after {sweep} sweeps")
        logger.debug(f"Jacobi: n = {n}, sweeps = {sweep}, off-diagonal norm = {off:.3e}")

        eigenvalues = np.real(np.diagonal(a))
        order = np.argsort(eigenvalues, kind='stable')
        return eigenvalues[order], v[:, order]
