"""Acceptance suite: one test per exit criterion, exact values, pinned budgets.

Run with `pytest tests/test_acceptance.py -v` for one pass/fail line per
criterion (the PASS prints also show with -s).  Counts are exact, every
certificate replays in the independent checker, and each criterion carries
its wall-clock budget.
"""

import random
import time
from contextlib import contextmanager

import pytest

from _oracles import brute_force_cones, gcd_of_minors_invariants
from ordlab.certcheck import (
    check_non_recurrence_certificate,
    check_nonorderability_certificate,
)
from ordlab.convexity import (
    convex_at_scale,
    coordinate_zero_subgroup,
    kernel_lattice_subgroup,
    klein_a_axis,
    maximal_convex_subgroup_zn,
)
from ordlab.counterexample import demo_counterexample
from ordlab.dynamics import (
    FiniteDynamicalSystem,
    non_recurrence_certificate,
    poincare_block_verification,
    poincare_return_times,
    recurrent_implies_conradian_check,
)
from ordlab.groups import (
    FiniteCyclic,
    FreeAbelian,
    FreeGroup,
    KleinBottle,
    quaternion_permutation_group,
    sanov_semidirect,
)
from ordlab.indicability import Presentation, abelianization, smith_normal_form, z_quotient_witness
from ordlab.orders import (
    OrderedChain,
    functional_lex_zn,
    klein_bottle_order,
    lex_zn,
    standard_sanov_order,
)
from ordlab.reports import CERTIFIED_FAILURE, HOLDS_AT_SCALE
from ordlab.search import enumerate_cones, refute_left_orderability

SEED = 20259


@contextmanager
def budget(seconds, label):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"{label} took {elapsed:.2f}s (budget {seconds}s)"
    print(f"ACCEPTANCE {label}: PASS ({elapsed:.2f}s)")


def test_criterion_1_exact_order_counts():
    """Cone counts match both the pinned values and brute-force search."""
    cases = [
        (FreeAbelian(1), 5, 2),
        (FreeAbelian(2), 1, 4),
        (KleinBottle(), 2, 4),
        (KleinBottle(), 3, 4),
        (FreeGroup(2), 1, 4),
    ]
    with budget(10, "1 order-counts"):
        for group, radius, expected in cases:
            result = enumerate_cones(group, radius)
            assert result.complete, (group.name, radius)
            assert len(result) == expected, (group.name, radius, len(result))
            oracle = brute_force_cones(group.ball(radius))
            assert result.signatures() == oracle, (group.name, radius)


def test_criterion_2_refutation_certificates():
    """Torsion groups are refuted by radius 3 with replayable derivations."""
    groups = [FiniteCyclic(2), FiniteCyclic(3), FiniteCyclic(5), quaternion_permutation_group()]
    with budget(10, "2 refutations"):
        for group in groups:
            outcome = refute_left_orderability(group, 3)
            assert outcome.status == "refuted", group.name
            assert outcome.radius <= 3
            assert check_nonorderability_certificate(outcome.certificate, group)


def test_criterion_3_action_laws(shipped_orders):
    """Translation composition and the open-set image law: 200 cases each,
    zero failures, across every shipped backend/order."""
    rng = random.Random(SEED)
    with budget(30, "3 action-laws"):
        composition_cases = 0
        while composition_cases < 200:
            name, oracle = shipped_orders[composition_cases % len(shipped_orders)]
            group = oracle.group
            g1 = group.random_element(rng, 2)
            g2 = group.random_element(rng, 2)
            once = oracle.translate(g1).translate(g2)
            combined = oracle.translate(group.multiply(g1, g2))
            for g in group.ball(2):
                if g == group.identity():
                    continue
                assert once.positive(g) == combined.positive(g), (name, g1, g2, g)
            composition_cases += 1

        image_cases = 0
        while image_cases < 200:
            name, oracle = shipped_orders[image_cases % len(shipped_orders)]
            group = oracle.group
            elems = {group.random_element(rng, 2) for _ in range(3)}
            if len(elems) != 3:
                continue
            chain = OrderedChain(tuple(elems))
            gamma = group.random_element(rng, 2)
            moved = chain.translated(group, gamma)
            if len(set(moved.elements)) != len(moved.elements):
                continue
            assert oracle.in_basic_open(chain) == oracle.translate(gamma).in_basic_open(
                moved
            ), (name, chain.elements, gamma)
            image_cases += 1


def test_criterion_4_poincare_suite():
    """100 random invariant systems recur exactly; rotation returns pinned."""
    rng = random.Random(SEED)
    with budget(5, "4 poincare"):
        rotation = FiniteDynamicalSystem.rotation(6)
        assert poincare_return_times(rotation, [0, 3]) == {0: 3, 3: 3}
        assert poincare_return_times(rotation, [0]) == {0: 6}
        for _ in range(100):
            system = FiniteDynamicalSystem.random_invariant(rng, 64)
            subset = [x for x in range(system.size) if rng.random() < 0.4] or [0]
            times = poincare_return_times(system, subset)
            for a, t in times.items():
                if system.weights[a] > 0:
                    assert t is not None, (system.size, a)
            for n in range(1, system.size + 1):
                report = poincare_block_verification(system, subset, n)
                assert report.escaping_measure == 0, (system.size, n)


def test_criterion_5_recurrence_implies_conradian(shipped_orders):
    """No instance anywhere shows a recurrence witness without its
    Conradian conclusion (balls up to radius 3, exponents up to 10)."""
    with budget(60, "5 lemma-shadow"):
        for name, oracle in shipped_orders:
            group = oracle.group
            for radius in (1, 2, 3):
                ball = group.ball(radius)
                report = recurrent_implies_conradian_check(oracle, ball, 10)
                assert report.ok(), (name, radius, report.violations)


def test_criterion_6_counterexample_reproduction():
    """All five demo stages with the pinned certificate data."""
    with budget(5, "6 counterexample"):
        report = demo_counterexample()
        assert report.ok
        stages = {s["stage"]: s for s in report.stages}
        assert stages["conradian_at_scale"]["verdict"] == HOLDS_AT_SCALE
        assert stages["conradian_at_scale"]["data"]["bound"] == 2
        nonrec = stages["non_recurrence"]
        assert nonrec["verdict"] == CERTIFIED_FAILURE
        assert nonrec["data"]["start_vector"] == [1, -3]
        assert nonrec["data"]["matrix"] == [[5, 2], [2, 1]]
        assert nonrec["data"]["threshold"] == 1
        assert nonrec["data"]["orbit_prefix"] == [[-1, -1]]
        assert stages["common_eigenline"]["data"]["conjugate"] == [[7, -4], [2, -1]]
        assert stages["common_eigenline"]["verdict"] == "distinct_eigenlines"
        assert "certificate_replay" in stages


def test_criterion_7_indicability():
    """Smith invariants agree with the gcd-of-minors oracle; witnesses
    annihilate every relator; the three pinned presentations are exact."""
    rng = random.Random(SEED)
    with budget(10, "7 indicability"):
        for _ in range(500):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            matrix = [[rng.randint(-30, 30) for _ in range(cols)] for _ in range(rows)]
            assert smith_normal_form(matrix).invariants == gcd_of_minors_invariants(matrix)

        rank_one = Presentation.from_lists(2, [[1, 1, -2, -2, -2]])
        assert abelianization(rank_one).free_rank == 1
        phi = z_quotient_witness(rank_one)
        assert phi is not None and 2 * phi[0] - 3 * phi[1] == 0

        klein = Presentation.from_lists(2, [[2, 1, -2, 1]])
        snf = abelianization(klein)
        assert snf.free_rank == 1 and snf.torsion == (2,)

        torsion = Presentation.from_lists(1, [[1, 1, 1, 1, 1]])
        assert abelianization(torsion).free_rank == 0
        assert z_quotient_witness(torsion) is None

        for _ in range(50):
            gens = rng.randint(1, 4)
            relators = [
                [rng.choice((1, -1)) * rng.randint(1, gens) for _ in range(rng.randint(1, 6))]
                for _ in range(rng.randint(0, 3))
            ]
            pres = Presentation.from_lists(gens, relators)
            phi = z_quotient_witness(pres)
            if phi is not None:
                for row in pres.exponent_matrix():
                    assert sum(r * p for r, p in zip(row, phi)) == 0


def test_criterion_8_convexity():
    """Two convex verdicts, one replayable violation, and exact maximal
    convex subgroups confirmed by exhaustive checks at radius 4."""
    z2 = FreeAbelian(2)
    kb = KleinBottle()
    lex = lex_zn(z2)
    with budget(20, "8 convexity"):
        assert convex_at_scale(lex, coordinate_zero_subgroup(z2, [0]), z2.ball(3)).convex
        violation = convex_at_scale(lex, coordinate_zero_subgroup(z2, [1]), z2.ball(2))
        assert not violation.convex
        gamma, lam = violation.violation
        assert lex.positive(gamma) and lex.compare(gamma, lam) == -1
        assert convex_at_scale(klein_bottle_order(kb), klein_a_axis(kb), kb.ball(2)).convex

        maximal = maximal_convex_subgroup_zn(lex)
        assert convex_at_scale(lex, maximal, z2.ball(4)).convex
        assert (0, 4) in maximal and (1, 0) not in maximal

        functional = functional_lex_zn(z2, (2, 3))
        kernel = maximal_convex_subgroup_zn(functional)
        assert convex_at_scale(functional, kernel, z2.ball(4)).convex
        assert kernel.generators == ((3, -2),)
        explicit = kernel_lattice_subgroup(z2, (2, 3))
        for v in z2.ball(4):
            assert (v in kernel) == (v in explicit)


def test_criterion_9_separation_exhibit():
    """One shipped order is Conradian at scale yet certified non-recurrent:
    recurrence is strictly stronger than the Conradian condition on this
    instance."""
    from ordlab.dynamics import conradian_at_scale, recurrent_at_scale

    with budget(10, "9 separation"):
        group = sanov_semidirect()
        oracle = standard_sanov_order(group)
        ball = group.ball(2)
        conradian = conradian_at_scale(oracle, ball, 2)
        recurrent = recurrent_at_scale(oracle, ball, 10)
        assert conradian.status == HOLDS_AT_SCALE
        assert recurrent.status == CERTIFIED_FAILURE
        assert check_non_recurrence_certificate(recurrent.certificate)
