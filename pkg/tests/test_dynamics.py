"""Finite recurrence systems, order dynamics at scale, counterexample machinery."""

from fractions import Fraction

import pytest

from ordlab.dynamics import (
    FiniteDynamicalSystem,
    common_eigenline,
    conradian_at_scale,
    eigen_data,
    functional_sign_extraction,
    is_hyperbolic,
    non_recurrence_certificate,
    poincare_block_verification,
    poincare_return_times,
    recurrence_witnesses,
    recurrent_at_scale,
    recurrent_implies_conradian_check,
    resultant_of_quadratics,
)
from ordlab.groups import FreeAbelian, FreeGroup, KleinBottle, sanov_semidirect
from ordlab.orders import (
    OrderedChain,
    cone_oracle_from_partial,
    functional_lex_zn,
    klein_bottle_order,
    lex_zn,
    standard_sanov_order,
)
from ordlab.reports import CERTIFIED_FAILURE, FAILS_AT_SCALE, HOLDS_AT_SCALE
from ordlab.search import enumerate_cones

Z1 = FreeAbelian(1)
Z2 = FreeAbelian(2)


# -- Poincare on finite systems ------------------------------------------------


def test_rotation_return_times():
    system = FiniteDynamicalSystem.rotation(6)
    assert poincare_return_times(system, [0, 3]) == {0: 3, 3: 3}
    assert poincare_return_times(system, [0]) == {0: 6}


def test_null_transient_point_no_return():
    system = FiniteDynamicalSystem(
        ("t", "x", "y"), (1, 2, 1), (Fraction(0), Fraction(1, 2), Fraction(1, 2))
    )
    assert system.is_measure_preserving()
    assert poincare_return_times(system, [0]) == {0: None}


def test_return_times_require_invariance():
    skewed = FiniteDynamicalSystem(
        ("0", "1"), (1, 0), (Fraction(1, 3), Fraction(2, 3))
    )
    with pytest.raises(ValueError):
        poincare_return_times(skewed, [0])


def test_block_verification_rotation():
    system = FiniteDynamicalSystem.rotation(6)
    report = poincare_block_verification(system, [0, 3], 3)
    assert report.block_union == (0, 3)
    assert report.escaping_measure == 0 and report.holds
    report = poincare_block_verification(system, [0], 2)
    assert report.block_union == (0, 2, 4)
    assert report.holds


def test_block_verification_empty_subset():
    system = FiniteDynamicalSystem.rotation(4)
    report = poincare_block_verification(system, [], 2)
    assert report.escaping_measure == 0 and report.holds


def test_random_invariant_systems_recur(rng):
    """Positive-weight points always return; escape measure is always zero."""
    for _ in range(30):
        system = FiniteDynamicalSystem.random_invariant(rng, 32)
        subset = [x for x in range(system.size) if rng.random() < 0.4] or [0]
        times = poincare_return_times(system, subset)
        for a, t in times.items():
            if system.weights[a] > 0:
                assert t is not None and 1 <= t <= system.size
        for n in range(1, system.size + 1):
            assert poincare_block_verification(system, subset, n).holds


# -- conradian condition ---------------------------------------------------------


def test_conradian_abelian_all_witnesses_one():
    report = conradian_at_scale(lex_zn(Z2), Z2.ball(2), 1)
    assert report.status == HOLDS_AT_SCALE
    assert all(entry.witness == 1 for entry in report.table)


def test_conradian_sanov_extension_holds_at_two():
    group = sanov_semidirect()
    oracle = standard_sanov_order(group)
    report = conradian_at_scale(oracle, group.ball(2), 2)
    assert report.status == HOLDS_AT_SCALE
    assert report.failed == 0
    assert any(entry.witness == 2 for entry in report.table)


def test_conradian_adversarial_cone_fails():
    """Some radius-3 free-group cone has a pair with no witness by n = 3."""
    found_failure = False
    for cone in enumerate_cones(FreeGroup(2), 3, limit=64):
        report = conradian_at_scale(cone_oracle_from_partial(cone), cone.ball, 3)
        if report.status == FAILS_AT_SCALE:
            found_failure = True
            break
    assert found_failure


# -- recurrence witnesses ----------------------------------------------------------


def test_witnesses_bi_invariant_z():
    order = lex_zn(Z1)
    chain = OrderedChain(((0,), (5,)))
    assert recurrence_witnesses(order, (1,), chain, 10) == list(range(1, 11))


def test_witnesses_abelian_plane():
    order = lex_zn(Z2)
    chain = OrderedChain(((0, 0), (1, 0)))
    assert recurrence_witnesses(order, (0, 1), chain, 5) == [1, 2, 3, 4, 5]


def test_witnesses_empty_for_contracting_direction():
    group = sanov_semidirect()
    oracle = standard_sanov_order(group)
    t_inverse = group.evaluate_word([-2, -1])  # (A B)^-1 lifted to the extension
    v_bar = (group.identity()[0], (1, -3))
    chain = OrderedChain((group.identity(), v_bar))
    assert recurrence_witnesses(oracle, t_inverse, chain, 50) == []


def test_witnesses_require_increasing_chain():
    order = lex_zn(Z1)
    with pytest.raises(ValueError):
        recurrence_witnesses(order, (1,), OrderedChain(((5,), (0,))), 5)


def test_witness_translation_duality(rng, shipped_orders):
    """Shifting the chain by gamma^n agrees with moving the order by gamma^-n."""
    for name, oracle in shipped_orders:
        group = oracle.group
        for _ in range(10):
            a = group.random_element(rng, 2)
            b = group.random_element(rng, 2)
            if a == b:
                continue
            chain = (
                OrderedChain((a, b))
                if oracle.compare(a, b) == -1
                else OrderedChain((b, a))
            )
            gamma = group.random_element(rng, 2)
            if gamma == group.identity():
                continue
            # cross_check=True raises on any disagreement
            recurrence_witnesses(oracle, gamma, chain, 6, cross_check=True)


# -- recurrence at scale ------------------------------------------------------------


def test_recurrent_z_standard_holds():
    report = recurrent_at_scale(lex_zn(Z1), Z1.ball(3), 10, max_chain_len=3)
    assert report.status == HOLDS_AT_SCALE


def test_recurrent_lex_plane_holds():
    report = recurrent_at_scale(lex_zn(Z2), Z2.ball(2), 10, max_chain_len=3, budget=2000)
    assert report.status == HOLDS_AT_SCALE


def test_recurrent_sanov_extension_certified_failure():
    group = sanov_semidirect()
    oracle = standard_sanov_order(group)
    report = recurrent_at_scale(oracle, group.ball(2), 10)
    assert report.status == CERTIFIED_FAILURE
    assert report.certificate is not None
    assert report.certificate.start_vector == (1, -3)


def test_recurrent_single_witness_does_not_count():
    report = recurrent_at_scale(
        lex_zn(Z1), Z1.ball(2), bound=1, max_chain_len=2, min_witnesses=3
    )
    assert report.status == FAILS_AT_SCALE
    assert all(len(entry.witness) == 1 for entry in report.table if not entry.ok)


# -- recurrence implies conradian ----------------------------------------------------


def test_implication_lex_plane():
    report = recurrent_implies_conradian_check(lex_zn(Z2), Z2.ball(2), 5)
    assert report.ok()
    assert report.checked_pairs > 0


def test_implication_klein():
    kb = KleinBottle()
    report = recurrent_implies_conradian_check(klein_bottle_order(kb), kb.ball(2), 5)
    assert report.ok()


def test_implication_sanov_extension():
    group = sanov_semidirect()
    oracle = standard_sanov_order(group)
    report = recurrent_implies_conradian_check(oracle, group.ball(2), 10, budget=3000)
    assert report.ok()
    assert report.skipped_pairs >= 0  # pairs without witnesses are skipped, not failures


# -- hyperbolic matrices ---------------------------------------------------------------


def test_is_hyperbolic_examples():
    assert is_hyperbolic(((5, 2), (2, 1))) is True
    assert is_hyperbolic(((1, 0), (0, 1))) is False
    assert is_hyperbolic(((1, 1), (0, 1))) is False  # parabolic


def test_is_hyperbolic_rejects_wrong_determinant():
    with pytest.raises(ValueError):
        is_hyperbolic(((2, 0), (0, 1)))


def test_eigen_data_exact():
    data = eigen_data(((5, 2), (2, 1)))
    assert data.trace == 6
    assert data.discriminant == 32  # eigenvalues 3 +- 2*sqrt(2)
    assert data.slope_quadratic == (2, -4, -2)


def test_resultant_shared_root():
    # (t-1)(t-2) and (t-2)(t-3) share t=2
    assert resultant_of_quadratics((1, -3, 2), (1, -5, 6)) == 0
    assert resultant_of_quadratics((1, -2, -1), (1, -4, 2)) == -7


def test_common_eigenline_powers_and_inverse():
    t = ((5, 2), (2, 1))
    t2 = ((29, 12), (12, 5))
    t_inv = ((1, -2), (-2, 5))
    assert common_eigenline(t, t2) is True
    assert common_eigenline(t, t_inv) is True


def test_common_eigenline_conjugate_distinct():
    assert common_eigenline(((5, 2), (2, 1)), ((7, -4), (2, -1))) is False


def test_common_eigenline_rejects_parabolic():
    with pytest.raises(ValueError):
        common_eigenline(((5, 2), (2, 1)), ((1, 1), (0, 1)))


# -- non-recurrence certificates ----------------------------------------------------


@pytest.fixture(scope="module")
def sanov_setup():
    group = sanov_semidirect()
    return group, standard_sanov_order(group)


def test_certificate_search_finds_canonical_vector(sanov_setup):
    group, oracle = sanov_setup
    cert = non_recurrence_certificate(group, oracle, (1, 2), search_box=5)
    assert cert.start_vector == (1, -3)
    assert cert.threshold == 1
    assert cert.orbit_prefix == ((-1, -1),)
    assert cert.gamma_word == (-2, -1)


def test_certificate_skips_expanding_seeds(sanov_setup):
    """(1, 0) rides the expanding direction: its whole orbit stays positive."""
    group, oracle = sanov_setup
    t = ((5, 2), (2, 1))
    from ordlab.intmat import mat_vec

    w = (1, 0)
    for _ in range(50):
        w = mat_vec(t, w)
        assert w[0] > 0
    cert = non_recurrence_certificate(group, oracle, (1, 2), search_box=2)
    assert cert is None  # box too small to reach (1, -3); (1, 0) never qualifies


def test_certificate_requires_functional_fiber(sanov_setup):
    group, oracle = sanov_setup
    with pytest.raises(ValueError):
        non_recurrence_certificate(group, oracle.reverse(), (1, 2))


def test_certificate_rejects_non_hyperbolic_word(sanov_setup):
    group, oracle = sanov_setup
    with pytest.raises(ValueError):
        non_recurrence_certificate(group, oracle, (1, -1), search_box=3)


# -- functional extraction -----------------------------------------------------------


def test_extraction_lex():
    fit = functional_sign_extraction(lex_zn(Z2), 100)
    assert fit.direction == (1, 0)
    assert all(p[0] == 0 for p in fit.exceptional_points)
    assert (0, 1) in fit.exceptional_points


def test_extraction_functional():
    fit = functional_sign_extraction(functional_lex_zn(Z2, (2, 3)), 100)
    assert fit.direction == (2, 3)


def test_extraction_reversal_negates():
    fit = functional_sign_extraction(lex_zn(Z2).reverse(), 100)
    assert fit.direction == (-1, 0)


def test_extraction_rejects_small_radius():
    with pytest.raises(ValueError):
        functional_sign_extraction(lex_zn(Z2), 4)


def test_extraction_rejects_non_lattice_group():
    with pytest.raises(ValueError):
        functional_sign_extraction(lex_zn(FreeAbelian(1)), 10)
