""" Reference eigensolver using LAPACK through scipy """

__all__ = ['Lapack']
__date__ = "2024-03-12"
__license__ = "GPLv3"
__version__ = "1.0.0"

from typing import Tuple

import numpy as np
from scipy import linalg

from ._eigensolver import Eigensolver


class Lapack(Eigensolver):
    """
    Wrapper of scipy.linalg.eigh. Used to cross-check the Jacobi solver.
    """

    def __init__(self, driver: str = None, **kwargs):
        super().__init__(**kwargs)
        self.eigensolver_name = 'lapack'
        self.driver = driver

    def decompose(self, matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        eigenvalues, eigenvectors = linalg.eigh(matrix, driver=self.driver)
        return eigenvalues, eigenvectors
