from ._eigensolver import *
from .jacobi import Jacobi
from .lapack import Lapack
