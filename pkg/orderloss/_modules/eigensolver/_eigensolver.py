"""
This file contains the base class for the Hermitian eigensolvers.
"""

__all__ = ["Eigensolver", ]
__date__ = "2024-03-12"
__version__ = '1.0.0'

from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np


class Eigensolver(ABC):
    """
    The Eigensolver base class used by numkit.hermitian_eig.
    The subclass is selected through the "eigensolver_kwargs" setting
    with the "get_subclass" factory.

    Attributes
    ----------
    eigensolver_name : str
        name of the Eigensolver class
    (more attributes are specified in the subclasses)

    Methods
    -------
    decompose(self, matrix: np.ndarray) : np.ndarray, np.ndarray
        returns the eigenvalues in ascending order
        and the orthonormal eigenvectors as columns.
        (specified in the subclasses)
    """

    def __init__(self, **kwargs):
        self.eigensolver_name = 'None'

    @abstractmethod
    def decompose(self, matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Diagonalize a Hermitian matrix

        Parameters
        ----------
        matrix : ndarray
            complex Hermitian (n, n) matrix

        Returns
        -------
        eigenvalues : ndarray
            real eigenvalues in ascending order
        eigenvectors : ndarray
            orthonormal eigenvectors as columns
        """
        raise NotImplementedError('No eigensolver subclass set')
