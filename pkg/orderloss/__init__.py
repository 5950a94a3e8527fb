"""
orderloss: distillable entanglement and information loss of
N = 2J entangled pairs whose order on Bob's side is lost.
For usage see README.md!
"""
from . import constants
from .numkit import (StateVector, Operator, Spectrum, InfiniteRelativeEntropyError,
                     SizeGuardError)
from .coupled_basis import CoupledLabel, CoupledBasis, build_basis, degeneracy
from .states import SchmidtParam, BlockSpectrum, closed_form_sigma, shuffle_channel
from .quantities import (SweepRecord, distillable_entanglement, information_loss, ratio,
                         sweep)
from .distill import enumerate_outcomes, average_yield, run_shot
from .bounds import separable_rho, relative_entropy_bound, certify_optimality
from .orderloss_main import main, __version__
