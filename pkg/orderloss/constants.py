"""
This file contains constants and parameters which should be treated as constant
"""

__license__ = "GPLv3"
__version__ = "1.0.0"

import os
import numpy as np

# -------- main_directories ---------
# directory of the orderloss package
ORDERLOSS_DIR = os.path.abspath(os.path.dirname(os.path.realpath(__file__)))
# location for config
DEFAULT_CONFIG_DIR = os.path.join(ORDERLOSS_DIR, "_config_files")
# default config file
DEFAULT_CONFIG_FILE = os.path.join(DEFAULT_CONFIG_DIR, "_default.orderloss_conf")

# -------- numerical tolerances --------
# all logarithms are base 2 (results in bits / ebits)
LOG_BASE = 2.0
LN2 = np.log(2.0)

# normalisation of state vectors
NORM_TOL = 1e-12
# max |M - M^dagger| entry for operators flagged hermitian
HERMITIAN_TOL = 1e-12
# trace of a density operator
TRACE_TOL = 1e-12
# eigenvalues in [-NEGATIVE_EIG_TOL, 0] are roundoff and clamped to 0
NEGATIVE_EIG_TOL = 1e-10
# eigenvalues below SUPPORT_TOL are treated as outside the support
SUPPORT_TOL = 1e-12
# Jacobi convergence: off-diagonal Frobenius mass < JACOBI_TOL * ||H||
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
# residual of Gram-Schmidt below which a vector counts as dependent
DEPENDENCE_TOL = 1e-8
# probability below which a protocol branch is dropped
BRANCH_TOL = 1e-12
# outcome probabilities must sum to one within this tolerance
PROBABILITY_SUM_TOL = 1e-10
# delta_I below which the ratio is flagged undefined
RATIO_TOL = 1e-12

# -------- size guards --------
# full density matrices over 4J qubits
BRUTE_FORCE_MAX_J = 2
# with the big override (4J = 12 qubits, 4096 x 4096 complex matrices)
BIG_MAX_J = 3
# explicit coupled basis over 2J qubits
BASIS_MAX_J = 4
# closed-form quantities only
CLOSED_FORM_MAX_J = 16

# -------- output --------
SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"

# -------- exit codes --------
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_SIZE_GUARD = 3

# -------- special values --------
MAX_ENTANGLED_ALPHA = 1 / np.sqrt(2)

# Column names of a sweep row.
# You can rename each column, but you must keep the order!
SWEEP_COLUMNS = ["J", "alpha", "E_initial", "E_D", "delta_I", "ratio", "ratio_defined"]
