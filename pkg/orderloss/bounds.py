"""
Relative entropy upper bound on the distillable entanglement.

The reference state rho is the dephasing of sigma in the product coupled
basis |j, m, a>_A |k, m', b>_B. Its only nonzero entries are

    p_j q_m  on  |j, m, a><j, m, a| (x) |j, m, b><j, m, b|

with q_m the squared Schmidt coefficients of the spin j blocks, so rho is
a mixture of product states and S(sigma || rho) = sum_j d_j**2 p_j S_j.
"""

__all__ = ["CertificateTerm", "SeparableCertificate", "OptimalityReport", "separable_rho",
           "relative_entropy_bound", "certify_optimality"]
__date__ = "2024-03-19"
__license__ = "GPLv3"
__version__ = "1.0.0"

import json
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import special

from . import constants as const
from .coupled_basis import build_basis, degeneracy
from .numkit import (Operator, InfiniteRelativeEntropyError, check_size, relative_entropy,
                     tensor)
from .states import SchmidtParam, closed_form_sigma, assemble_operator
from .orderloss_utils.orderloss_logging import logger


class CertificateTerm(BaseModel):
    weight: float
    alice_state: Operator
    bob_state: Operator

    class Config:
        arbitrary_types_allowed = True


class SeparableCertificate(BaseModel):
    """ rho = sum_k weight_k alice_state_k (x) bob_state_k """
    terms: List[CertificateTerm]

    def total_weight(self) -> float:
        return float(sum(term.weight for term in self.terms))

    def reconstruct(self) -> Operator:
        entries = sum(term.weight * tensor(term.alice_state, term.bob_state).entries
                      for term in self.terms)
        return Operator(entries, hermitian=True)

    def is_valid(self, tol: float = const.TRACE_TOL) -> bool:
        """ weights form a distribution and every factor is a density operator """
        if any(term.weight < 0 for term in self.terms):
            return False
        if abs(self.total_weight() - 1) > tol:
            return False
        for term in self.terms:
            for factor in (term.alice_state, term.bob_state):
                if abs(factor.trace().real - 1) > tol:
                    return False
                if np.linalg.eigvalsh(factor.entries).min() < -const.NEGATIVE_EIG_TOL:
                    return False
        return True


class OptimalityReport(BaseModel):
    """ protocol yield against the relative entropy bound """
    J: int
    alpha: float
    yield_bits: float = Field(alias="yield")
    bound: float
    gap: float
    passed: bool = Field(alias="pass")
    source: str = "protocol"

    class Config:
        allow_population_by_field_name = True

    def to_json(self) -> str:
        return json.dumps({key: self.dict(by_alias=True)[key]
                           for key in ("J", "alpha", "yield", "bound", "gap", "pass")})


def separable_rho(J: int, s: SchmidtParam, big: bool = False
                  ) -> Tuple[Operator, SeparableCertificate]:
    """
    Dephased reference state and its product decomposition.

    Returns
    -------
    rho : Operator
        sigma with all off-diagonal entries in the product coupled basis removed
    certificate : SeparableCertificate
        the product terms of rho with nonzero weight
    """
    check_size(J, const.BRUTE_FORCE_MAX_J, "separable_rho", big, const.BIG_MAX_J)
    spectrum = closed_form_sigma(J, s, materialize=True, big=big)
    sigma = assemble_operator(spectrum, big=big)

    basis = build_basis(J)
    product = np.kron(basis.matrix(), basis.matrix())
    diagonal = np.real(np.sum(product.conj() * (sigma.entries @ product), axis=0))
    diagonal[diagonal < 0] = 0.
    rho = Operator((product * diagonal) @ product.conj().T, hermitian=True)

    terms = []
    for j in range(J + 1):
        p_j = spectrum.probabilities[j]
        for m, c_m in zip(range(-j, j + 1), spectrum.coefficients[j]):
            weight = p_j * c_m ** 2
            if weight <= 0:
                continue
            for alpha_j in range(1, degeneracy(J, j) + 1):
                alice = basis[j, m, alpha_j].projector()
                for beta_j in range(1, degeneracy(J, j) + 1):
                    terms.append(CertificateTerm(weight=weight, alice_state=alice,
                                                 bob_state=basis[j, m, beta_j].projector()))
    return rho, SeparableCertificate(terms=terms)


def _block_bound(J: int, s: SchmidtParam) -> float:
    """ sum over blocks of -p_j sum_m q_m log2 q_m """
    spectrum = closed_form_sigma(J, s, materialize=False)
    return float(sum(degeneracy(J, j) ** 2 * p_j
                     * np.sum(special.entr(spectrum.coefficients[j] ** 2))
                     for j, p_j in spectrum.probabilities.items()) / const.LN2)


def relative_entropy_bound(J: int, s: SchmidtParam, method: str = "auto",
                           big: bool = False, tol: float = 1e-9) -> float:
    """
    S(sigma || rho) in bits.

    Parameters
    ----------
    method : str
        'blocks' uses the block structure shared by sigma and rho (any J),
        'matrix' the eigendecompositions of the full matrices,
        'both' computes both and requires agreement within tol,
        'auto' is 'both' within the brute-force range and 'blocks' beyond
    """
    if method == "auto":
        method = "both" if J <= const.BRUTE_FORCE_MAX_J else "blocks"
    if method not in ("blocks", "matrix", "both"):
        msg = f"unknown method {method!r}"
        logger.error(msg)
        raise ValueError(msg)

    blocks = _block_bound(J, s) if method in ("blocks", "both") else None
    if method == "blocks":
        return blocks

    sigma = assemble_operator(closed_form_sigma(J, s, materialize=True, big=big), big=big)
    rho, _ = separable_rho(J, s, big)
    try:
        matrix = relative_entropy(sigma, rho)
    except InfiniteRelativeEntropyError:
        logger.critical(f"internal error: sigma leaves the support of rho at J = {J}, "
                        f"alpha = {s.alpha:.12g}")
        raise
    if method == "matrix":
        return matrix

    if abs(matrix - blocks) > tol:
        msg = f"relative entropy paths disagree at J = {J}, alpha = {s.alpha:.12g}: " \
              f"blocks {blocks:.12g}, matrix {matrix:.12g}"
        logger.critical(msg)
        raise RuntimeError(msg)
    return blocks


def certify_optimality(J: int, s: SchmidtParam, big: bool = False,
                       tol: float = 1e-9) -> OptimalityReport:
    """
    Compare the average protocol yield with S(sigma || rho).
    Passes iff |yield - bound| < tol and yield <= bound + 1e-12.
    Beyond the brute-force range the closed-form yield is used.
    Within it the matrix path of the bound is computed as well and a
    disagreement with the block path counts into the gap.
    """
    from .distill import enumerate_outcomes, average_yield
    from .quantities import distillable_entanglement

    limit = const.BIG_MAX_J if big else const.BRUTE_FORCE_MAX_J
    bound = relative_entropy_bound(J, s, method="blocks")
    path_gap = 0.
    if J <= limit:
        yield_bits = average_yield(enumerate_outcomes(J, s, big))
        source = "protocol"
        try:
            matrix = relative_entropy_bound(J, s, method="matrix", big=big)
        except InfiniteRelativeEntropyError:
            matrix = np.inf
        path_gap = abs(matrix - bound)
        if path_gap > tol:
            logger.error(f"relative entropy paths disagree at J = {J}, alpha = {s.alpha:.12g}: "
                         f"blocks {bound:.12g}, matrix {matrix:.12g}")
    else:
        yield_bits = distillable_entanglement(J, s)
        source = "closed_form"
    gap = max(abs(yield_bits - bound), path_gap)
    passed = bool(gap < tol and yield_bits <= bound + 1e-12)
    if not passed:
        logger.error(f"optimality not certified at J = {J}, alpha = {s.alpha:.12g}: "
                     f"yield {yield_bits:.12g}, bound {bound:.12g}")
    return OptimalityReport(J=J, alpha=s.alpha, yield_bits=yield_bits, bound=bound, gap=gap,
                            passed=passed, source=source)
