'Unit tests for the relative entropy bound and its separable certificate'

import json

import numpy as np
import pytest

from orderloss import bounds
from orderloss.bounds import (
    CertificateTerm, SeparableCertificate, OptimalityReport, separable_rho,
    relative_entropy_bound, certify_optimality)
from orderloss.numkit import basis_ket, reduce_qubits
from orderloss.quantities import distillable_entanglement
from orderloss.states import SchmidtParam, shuffle_channel


def test_two_pair_bound(max_entangled):
    assert relative_entropy_bound(1, max_entangled, method="both") == pytest.approx(
        0.75 * np.log2(3), abs=1e-9)


@pytest.mark.parametrize("alpha", [0.2, 0.6, 1 / np.sqrt(2)])
def test_matrix_and_block_paths_agree(alpha):
    s = SchmidtParam.from_alpha(alpha)
    for J in (1, 2):
        blocks = relative_entropy_bound(J, s, method="blocks")
        matrix = relative_entropy_bound(J, s, method="matrix")
        assert matrix == pytest.approx(blocks, abs=1e-9)


@pytest.mark.parametrize("J", [1, 3, 8, 16])
def test_bound_equals_distillable_entanglement(J, partial):
    assert relative_entropy_bound(J, partial) == pytest.approx(
        distillable_entanglement(J, partial), abs=1e-10)


def test_unknown_method(partial):
    with pytest.raises(ValueError, match="unknown method"):
        relative_entropy_bound(1, partial, method="sdp")


@pytest.mark.parametrize("J", [1, 2])
def test_separable_rho(J, partial):
    rho, certificate = separable_rho(J, partial)
    assert rho.trace().real == pytest.approx(1.)
    assert certificate.is_valid()
    assert certificate.total_weight() == pytest.approx(1.)
    np.testing.assert_allclose(certificate.reconstruct().entries, rho.entries, atol=1e-12)
    # rho is invariant under the loss of Bob's order
    np.testing.assert_allclose(shuffle_channel(rho, J).entries, rho.entries, atol=1e-12)
    # and leaves Alice's reduced state alone
    alice = range(2 * J)
    sigma_alice = sum(term.weight * term.alice_state.entries for term in certificate.terms)
    np.testing.assert_allclose(reduce_qubits(rho, alice).entries, sigma_alice, atol=1e-12)


def test_invalid_certificate():
    zero = basis_ket("0").projector()
    one = basis_ket("1").projector()
    assert SeparableCertificate(terms=[
        CertificateTerm(weight=0.5, alice_state=zero, bob_state=one),
        CertificateTerm(weight=0.5, alice_state=one, bob_state=zero)]).is_valid()
    assert not SeparableCertificate(terms=[
        CertificateTerm(weight=0.7, alice_state=zero, bob_state=one)]).is_valid()
    assert not SeparableCertificate(terms=[
        CertificateTerm(weight=1.5, alice_state=zero, bob_state=one),
        CertificateTerm(weight=-0.5, alice_state=one, bob_state=zero)]).is_valid()


@pytest.mark.parametrize("J", [1, 2])
def test_certify_optimality(J, partial):
    report = certify_optimality(J, partial)
    assert report.passed
    assert report.source == "protocol"
    assert report.gap < 1e-9
    record = json.loads(report.to_json())
    assert list(record) == ["J", "alpha", "yield", "bound", "gap", "pass"]
    assert record["pass"] is True


def test_certify_beyond_brute_force(partial):
    report = certify_optimality(5, partial)
    assert report.source == "closed_form"
    assert report.passed


def test_report_aliases():
    report = OptimalityReport(J=1, alpha=0.5, yield_bits=1., bound=1., gap=0., passed=True)
    assert report.dict(by_alias=True)["yield"] == 1.
    report = OptimalityReport.parse_obj(
        {"J": 1, "alpha": 0.5, "yield": 1., "bound": 1., "gap": 0., "pass": False})
    assert not report.passed


def test_certify_reports_disagreeing_paths(monkeypatch, partial):
    monkeypatch.setattr(bounds, "_block_bound", lambda J, s: 0.5)
    report = certify_optimality(1, partial)
    assert not report.passed
    assert report.bound == 0.5
    assert report.gap > 0.1
    assert json.loads(report.to_json())["pass"] is False
