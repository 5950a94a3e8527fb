"""
Acceptance suite run by `orderloss verify`.

Every check compares a computed error against a threshold of the
Tolerances model and reports PASS or FAIL. The report is a TAP-like
list written to standard output.
"""

__all__ = ["CheckResult", "run_suite", "format_report"]
__date__ = "2024-03-21"
__license__ = "GPLv3"
__version__ = "1.0.0"

import time
from typing import Callable, List

import numpy as np
from pydantic import BaseModel

from . import constants as const
from .bounds import separable_rho, relative_entropy_bound, certify_optimality
from .coupled_basis import build_basis, degeneracy, spin_operators
from .distill import enumerate_outcomes, average_yield, run_shot, monte_carlo
from .numkit import hermitian_eig, trace_distance, interleaved_state, von_neumann_entropy
from .quantities import (distillable_entanglement, maximal_distillable_entanglement,
                         two_pair_distillable_entanglement, information_loss, ratio, sweep)
from .states import (SchmidtParam, initial_state, shuffle_channel, closed_form_sigma,
                     assemble_operator, alice_reduction_invariance, cq_joint_state,
                     mutual_information)
from .orderloss_utils.orderloss_control import RunConfig, Tolerances
from .orderloss_utils.orderloss_logging import logger

MAX_ENTANGLED = SchmidtParam.from_alpha_sq("1/2")


class CheckResult(BaseModel):
    name: str
    passed: bool
    error: float
    tolerance: float
    detail: str = ""

    @classmethod
    def below(cls, name: str, error: float, tolerance: float, detail: str = "") -> "CheckResult":
        return cls(name=name, passed=bool(error < tolerance), error=float(error),
                   tolerance=tolerance, detail=detail)


def check_distillable_entanglement(J: int, tol: Tolerances, big: bool) -> List[CheckResult]:
    """ closed form, protocol yield and S(sigma || rho) at alpha = 1/sqrt(2) """
    s = MAX_ENTANGLED
    closed = distillable_entanglement(J, s)
    protocol = average_yield(enumerate_outcomes(J, s, big))
    bound = relative_entropy_bound(J, s, method="matrix", big=big)
    reference = maximal_distillable_entanglement(J)
    error = max(abs(closed - protocol), abs(closed - bound), abs(closed - reference))
    results = [CheckResult.below(
        f"E_D three paths J={J}", error, tol.closed_form,
        f"closed {closed:.12g}, protocol {protocol:.12g}, bound {bound:.12g}")]
    if J == 1:
        results.append(CheckResult.below(
            "E_D J=1 equals (3/4) log2 3", abs(closed - 0.75 * np.log2(3)), tol.closed_form))
    report = certify_optimality(J, s, big, tol.closed_form)
    results.append(CheckResult(name=f"optimality certificate J={J}", passed=report.passed,
                               error=report.gap, tolerance=tol.closed_form))
    return results


def check_two_pair_spectrum(tol: Tolerances) -> List[CheckResult]:
    """ nonzero spectrum {1/4, 3/4} and eigenvectors of the shuffled two pairs """
    sigma = shuffle_channel(initial_state(1, MAX_ENTANGLED).projector(), 1)
    spectrum = hermitian_eig(sigma)
    values = spectrum.eigenvalues
    error = max(abs(values[-1] - 0.75), abs(values[-2] - 0.25), np.max(np.abs(values[:-2])))
    results = [CheckResult.below("spectrum J=1 is {1/4, 3/4}", error, tol.spectrum)]

    phi_1 = interleaved_state({"0011": 1, "0110": -1, "1001": -1, "1100": 1})
    phi_2 = interleaved_state({"0000": 2, "0011": 1, "0110": 1, "1001": 1, "1100": 1, "1111": 2})
    overlap = [abs(np.vdot(phi.amplitudes, spectrum.eigenvectors[:, column]))
               for phi, column in ((phi_1, -2), (phi_2, -1))]
    results.append(CheckResult.below("eigenvectors J=1 match phi_1, phi_2",
                                     1 - min(overlap), tol.spectrum))
    return results


def check_two_pair_grid(tol: Tolerances, count: int) -> List[CheckResult]:
    """ closed form against the two pair expression and ratio = 1 on a grid """
    alphas = np.linspace(0, 1, count)
    records = sweep(1, alphas)
    closed_error = max(abs(record.E_D - two_pair_distillable_entanglement(
        SchmidtParam.from_alpha(record.alpha))) for record in records)
    ratio_error = max([abs(record.ratio - 1) for record in records
                       if record.ratio_defined and record.delta_I > 1e-6], default=0.)
    return [CheckResult.below(f"E_D J=1 on {count} point grid", closed_error, tol.grid),
            CheckResult.below(f"ratio J=1 equals 1 on {count} point grid", ratio_error,
                              tol.ratio)]


def check_brute_force(J: int, alphas: List[float], tol: Tolerances, big: bool
                      ) -> List[CheckResult]:
    """ shuffled state against the assembled closed form """
    results = []
    for alpha in alphas:
        s = SchmidtParam.from_alpha(alpha)
        brute = shuffle_channel(initial_state(J, s).projector(), J, big)
        closed = assemble_operator(closed_form_sigma(J, s, materialize=True, big=big), big)
        results.append(CheckResult.below(f"shuffle vs closed form J={J} alpha={alpha:.6g}",
                                         trace_distance(brute, closed), tol.trace_distance))
        entropy_error = abs(von_neumann_entropy(closed) - information_loss(J, s))
        results.append(CheckResult.below(f"S(sigma) vs delta_I J={J} alpha={alpha:.6g}",
                                         entropy_error, tol.trace_distance))
    alice_error = alice_reduction_invariance(J, MAX_ENTANGLED, big)
    results.append(CheckResult.below(f"Alice reduced state invariant J={J}", alice_error,
                                     tol.trace_distance))
    return results


def check_ratio_bound(tol: Tolerances, count: int) -> List[CheckResult]:
    """ ratio <= 1 for J = 1 .. 4 and the J = 2 reference value """
    alphas = np.linspace(0, 1, count)
    results = []
    for J in range(1, 5):
        excess = max([record.ratio - 1 for record in sweep(J, alphas) if record.ratio_defined],
                     default=0.)
        results.append(CheckResult.below(f"ratio <= 1 J={J}", max(excess, 0.), tol.ratio))
    value = ratio(2, MAX_ENTANGLED).ratio
    results.append(CheckResult.below("ratio J=2 alpha=1/sqrt(2) is 0.700964",
                                     abs(value - 0.700964), 1e-6,
                                     f"ratio {value:.12g}"))
    return results


def check_mutual_information(tol: Tolerances, count: int) -> List[CheckResult]:
    """ I(ancilla : system) = S(sigma) at J = 1 """
    error = 0.
    for alpha in np.linspace(0, 1, count):
        s = SchmidtParam.from_alpha(alpha)
        error = max(error, abs(mutual_information(cq_joint_state(1, s))
                               - information_loss(1, s)))
    return [CheckResult.below(f"mutual information J=1 on {count} point grid", error,
                              tol.mutual_information)]


def check_protocol(J: int, tol: Tolerances, shots: int, seed: int, big: bool
                   ) -> List[CheckResult]:
    """ structure of the enumerated and sampled protocol """
    s = MAX_ENTANGLED
    outcomes = enumerate_outcomes(J, s, big)
    spectrum = closed_form_sigma(J, s, materialize=False)
    probability_error = max(abs(outcome.probability - spectrum.probabilities[outcome.j])
                            for outcome in outcomes)
    expected_branches = sum(degeneracy(J, j) ** 2 for j in range(J + 1))
    results = [
        CheckResult.below(f"branch probabilities J={J}", probability_error, tol.probability),
        CheckResult(name=f"Bob's sector equals Alice's J={J}",
                    passed=all(o.bob_j == o.j for o in outcomes)
                    and len(outcomes) == expected_branches,
                    error=float(len(outcomes) - expected_branches), tolerance=0.),
        CheckResult.below(f"discarded pairs are singlets J={J}",
                          1 - min(o.discarded_fidelity for o in outcomes), tol.fidelity),
        ]

    summary = monte_carlo(J, s, shots, seed, outcomes=outcomes)
    counts = summary.groupby("j")["count"].sum()
    expected = np.array([degeneracy(J, j) ** 2 * spectrum.probabilities[j] for j in counts.index])
    frequency = counts.to_numpy() / shots
    std_error = np.sqrt(expected * (1 - expected) / shots)
    z_score = np.divide(np.abs(frequency - expected), std_error,
                        out=np.zeros(len(expected)), where=std_error > 0)
    results.append(CheckResult(name=f"Monte Carlo {shots} shots J={J}",
                               passed=bool(np.all(z_score <= tol.mc_sigma)),
                               error=float(np.max(z_score)), tolerance=tol.mc_sigma))

    first = run_shot(J, s, seed, big)[1].to_records()
    second = run_shot(J, s, seed, big)[1].to_records()
    results.append(CheckResult(name=f"identical seeds give identical traces J={J}",
                               passed=first == second, error=float(first != second),
                               tolerance=0.))
    return results


def check_basis(tol: Tolerances) -> List[CheckResult]:
    """ orthonormality, completeness, degeneracies and spin eigenvalues for J <= 4 """
    results = []
    for J in range(1, const.BASIS_MAX_J + 1):
        basis = build_basis(J)
        matrix = basis.matrix()
        dim = 2 ** (2 * J)
        orthonormal = np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim)))
        counts = all(basis.degeneracy(j) == degeneracy(J, j) for j in range(J + 1))
        total = sum(degeneracy(J, j) * (2 * j + 1) for j in range(J + 1))

        spin = spin_operators(2 * J)
        residual = 0.
        for label in basis.labels:
            v = basis.vectors[label].amplitudes
            residual = max(residual,
                           np.max(np.abs(spin.s2 @ v - label.j * (label.j + 1) * v)),
                           np.max(np.abs(spin.sz @ v - label.m * v)))
        results.append(CheckResult.below(f"basis J={J} orthonormal and complete",
                                         orthonormal if len(basis) == dim else np.inf,
                                         tol.basis))
        results.append(CheckResult(name=f"basis J={J} degeneracies",
                                   passed=counts and total == dim,
                                   error=float(abs(total - dim)), tolerance=0.))
        results.append(CheckResult.below(f"basis J={J} spin eigenvectors", residual, tol.basis))
    return results


def check_certificate(J: int, tol: Tolerances, big: bool) -> List[CheckResult]:
    """ separable reference state: product terms and shuffle invariance """
    rho, certificate = separable_rho(J, MAX_ENTANGLED, big)
    reconstruction = np.max(np.abs(certificate.reconstruct().entries - rho.entries))
    fixed_point = np.max(np.abs(shuffle_channel(rho, J, big).entries - rho.entries))
    return [
        CheckResult.below(f"certificate reconstructs rho J={J}",
                          reconstruction if certificate.is_valid() else np.inf,
                          tol.certificate),
        CheckResult.below(f"rho is a shuffle fixed point J={J}", fixed_point, tol.certificate),
        ]


def run_suite(config: RunConfig) -> List[CheckResult]:
    """
    Run all checks for config.J.

    Brute-force checks run for J <= 2 (J = 3 with the big override),
    closed-form checks always.
    """
    J, tol, big = config.J, config.tolerances, config.big
    seed = config.resolve_seed()
    shots = config.shots or config.verify_shots
    count = config.verify_grid_count

    suites: List[Callable[[], List[CheckResult]]] = [
        lambda: check_distillable_entanglement(J, tol, big),
        lambda: check_two_pair_spectrum(tol),
        lambda: check_two_pair_grid(tol, count),
        lambda: check_brute_force(J, config.verify_alphas, tol, big),
        lambda: check_ratio_bound(tol, count),
        lambda: check_mutual_information(tol, count),
        lambda: check_protocol(J, tol, shots, seed, big),
        lambda: check_basis(tol),
        lambda: check_certificate(J, tol, big),
        ]
    results = []
    for suite in suites:
        start = time.time()
        results.extend(suite())
        logger.log(15, f"{results[-1].name}: done in {time.time() - start:.2f}s")
    n_failed = sum(not result.passed for result in results)
    logger.log(25, f"verify J = {J}: {len(results) - n_failed} of {len(results)} checks passed")
    return results


def format_report(results: List[CheckResult]) -> str:
    lines = [f"1..{len(results)}"]
    for number, result in enumerate(results, start=1):
        status = "ok" if result.passed else "not ok"
        verdict = "PASS" if result.passed else "FAIL"
        line = f"{status} {number} - {verdict} {result.name} " \
               f"(error {result.error:.3g}, tolerance {result.tolerance:.3g})"
        if result.detail:
            line += f" # {result.detail}"
        lines.append(line)
    return "\n".join(lines) + "\n"
