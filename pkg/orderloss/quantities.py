"""
Closed-form entanglement and information quantities of the shuffled pairs:
sector table, distillable entanglement, information loss and the ratio
(E_initial - E_D) / delta_I.
All values in bits.
"""

__all__ = ["SweepRecord", "initial_entanglement", "block_table", "distillable_entanglement",
           "maximal_distillable_entanglement", "two_pair_distillable_entanglement",
           "information_loss", "ratio", "sweep"]
__date__ = "2024-03-15"
__license__ = "GPLv3"
__version__ = "1.0.0"

from typing import Iterable, List, Optional

import numpy as np
import pandas
from pydantic import BaseModel
from scipy import special
from tqdm import tqdm

from . import constants as const
from .coupled_basis import degeneracy
from .numkit import shannon_entropy
from .states import SchmidtParam, closed_form_sigma, BlockSpectrum
from .orderloss_utils.orderloss_logging import logger


class SweepRecord(BaseModel):
    """ one output row; ratio is None if delta_I vanishes """
    J: int
    alpha: float
    E_initial: float
    E_D: float
    delta_I: float
    ratio: Optional[float]
    ratio_defined: bool

    def as_row(self) -> dict:
        return {col: getattr(self, col) for col in const.SWEEP_COLUMNS}


def initial_entanglement(N: int, s: SchmidtParam) -> float:
    """ N times the binary entropy of alpha**2 """
    if N < 1:
        msg = f"number of pairs must be >= 1, got {N}"
        logger.error(msg)
        raise ValueError(msg)
    return N * shannon_entropy([s.alpha_sq, s.beta_sq])


def _spectrum(J: int, s: SchmidtParam) -> BlockSpectrum:
    return closed_form_sigma(J, s, materialize=False)


def block_table(J: int, s: SchmidtParam) -> pandas.DataFrame:
    """
    per sector j: degeneracy d_j, block probability p_j, total weight
    d_j**2 p_j, block entanglement S_j and log2(2j + 1)
    """
    spectrum = _spectrum(J, s)
    rows = []
    for j in range(J + 1):
        d_j = degeneracy(J, j)
        p_j = spectrum.probabilities[j]
        rows.append({
            "j": j, "d_j": d_j, "p_j": p_j, "weight": d_j ** 2 * p_j,
            "S_j": spectrum.entanglement_entropy(j), "log_dim": np.log2(2 * j + 1)})
    return pandas.DataFrame(rows, columns=["j", "d_j", "p_j", "weight", "S_j", "log_dim"])


def distillable_entanglement(J: int, s: SchmidtParam) -> float:
    """ sum_j d_j**2 p_j S_j """
    table = block_table(J, s)
    return float(np.sum(table.weight * table.S_j))


def maximal_distillable_entanglement(J: int) -> float:
    """
    alpha = 1/sqrt(2): p_j = (2j + 1) / (4**J d_j), so
    E_D = sum_j d_j (2j + 1) log2(2j + 1) / 4**J
    """
    return float(sum(degeneracy(J, j) * (2 * j + 1) * np.log2(2 * j + 1)
                     for j in range(J + 1)) / 4 ** J)


def two_pair_distillable_entanglement(s: SchmidtParam) -> float:
    """ two pairs (J = 1) written out in alpha and beta """
    a4 = s.alpha_sq ** 2
    b4 = s.beta_sq ** 2
    ab = s.alpha_sq * s.beta_sq
    total = special.xlogy(1 - ab, 1 - ab) \
        - (special.xlogy(a4, a4) + special.xlogy(b4, b4) + special.xlogy(ab, ab))
    return float(total / const.LN2)


def information_loss(J: int, s: SchmidtParam) -> float:
    """ S(sigma) = -sum_j d_j**2 p_j log2 p_j """
    spectrum = _spectrum(J, s)
    return float(sum(degeneracy(J, j) ** 2 * special.entr(p_j)
                     for j, p_j in spectrum.probabilities.items()) / const.LN2)


def ratio(J: int, s: SchmidtParam) -> SweepRecord:
    """ (E_initial - E_D) / delta_I, flagged undefined if delta_I vanishes """
    e_initial = initial_entanglement(2 * J, s)
    e_d = distillable_entanglement(J, s)
    delta_i = information_loss(J, s)
    defined = delta_i > const.RATIO_TOL
    value = (e_initial - e_d) / delta_i if defined else None
    if value is not None and value > 1 + 1e-9:
        logger.warning(f"ratio {value:.12g} > 1 at J = {J}, alpha = {s.alpha:.12g}")
    return SweepRecord(J=J, alpha=s.alpha, E_initial=e_initial, E_D=e_d, delta_I=delta_i,
                       ratio=value, ratio_defined=defined)


def sweep(J: int, alphas: Iterable[float], progress: bool = False) -> List[SweepRecord]:
    """ one SweepRecord per alpha, in the given order """
    alphas = list(alphas)
    return [ratio(J, SchmidtParam.from_alpha(alpha))
            for alpha in tqdm(alphas, desc=f"sweep J={J}", disable=not progress)]
