"""Certificate replay: valid certificates pass, tampered ones are rejected."""

import dataclasses

import pytest

from ordlab.certcheck import (
    CertificateError,
    check_non_recurrence_certificate,
    check_nonorderability_certificate,
)
from ordlab.dynamics import non_recurrence_certificate
from ordlab.groups import FiniteCyclic, FreeAbelian, quaternion_permutation_group, sanov_semidirect
from ordlab.orders import standard_sanov_order
from ordlab.search import basic_open_nonempty_at_radius, refute_left_orderability


@pytest.fixture(scope="module")
def cyclic_certificate():
    return refute_left_orderability(FiniteCyclic(5), 3).certificate


@pytest.fixture(scope="module")
def q8_certificate():
    return refute_left_orderability(quaternion_permutation_group(), 3).certificate


@pytest.fixture(scope="module")
def recurrence_certificate():
    group = sanov_semidirect()
    oracle = standard_sanov_order(group)
    return non_recurrence_certificate(group, oracle, (1, 2), search_box=5)


def test_cyclic_certificate_replays(cyclic_certificate):
    assert check_nonorderability_certificate(cyclic_certificate)


def test_q8_certificate_replays(q8_certificate):
    assert check_nonorderability_certificate(q8_certificate)


def test_open_set_certificate_replays():
    z1 = FreeAbelian(1)
    res = basic_open_nonempty_at_radius(z1, 3, [(0,), (2,), (1,)])
    assert check_nonorderability_certificate(res.certificate)


def test_certificate_rejects_dropped_branch(q8_certificate):
    if len(q8_certificate.branches) < 2:
        pytest.skip("single-branch certificate")
    tampered = dataclasses.replace(q8_certificate, branches=q8_certificate.branches[1:])
    with pytest.raises(CertificateError):
        check_nonorderability_certificate(tampered)


def test_certificate_rejects_flipped_step(cyclic_certificate):
    branch = cyclic_certificate.branches[0]
    if not branch.steps:
        pytest.skip("branch has no forced steps")
    step = branch.steps[0]
    bad_step = dataclasses.replace(step, sign=-step.sign)
    bad_branch = dataclasses.replace(branch, steps=(bad_step,) + branch.steps[1:])
    tampered = dataclasses.replace(
        cyclic_certificate, branches=(bad_branch,) + cyclic_certificate.branches[1:]
    )
    with pytest.raises(CertificateError):
        check_nonorderability_certificate(tampered)


def test_certificate_rejects_fabricated_contradiction(cyclic_certificate):
    branch = cyclic_certificate.branches[0]
    fake = dataclasses.replace(
        branch,
        contradiction=dataclasses.replace(
            branch.contradiction, elements=(0, 0) if len(branch.contradiction.elements) == 2 else (0, 0, 0)
        ),
    )
    tampered = dataclasses.replace(
        cyclic_certificate, branches=(fake,) + cyclic_certificate.branches[1:]
    )
    with pytest.raises(CertificateError):
        check_nonorderability_certificate(tampered)


def test_recurrence_certificate_replays(recurrence_certificate):
    assert check_non_recurrence_certificate(recurrence_certificate)


def test_recurrence_certificate_fields(recurrence_certificate):
    cert = recurrence_certificate
    assert cert.start_vector == (1, -3)
    assert cert.threshold == 1
    assert cert.orbit_prefix == ((-1, -1),)
    assert cert.orthant == (-1, -1)
    assert cert.matrix == ((5, 2), (2, 1))


def test_recurrence_certificate_rejects_wrong_prefix(recurrence_certificate):
    tampered = dataclasses.replace(recurrence_certificate, orbit_prefix=((1, 1),))
    with pytest.raises(CertificateError):
        check_non_recurrence_certificate(tampered)


def test_recurrence_certificate_rejects_bad_vector(recurrence_certificate):
    tampered = dataclasses.replace(recurrence_certificate, start_vector=(-1, 0))
    with pytest.raises(CertificateError):
        check_non_recurrence_certificate(tampered)


def test_recurrence_certificate_rejects_negative_entry_matrix(recurrence_certificate):
    tampered = dataclasses.replace(recurrence_certificate, matrix=((5, -2), (2, 1)))
    with pytest.raises(CertificateError):
        check_non_recurrence_certificate(tampered)
