"""Convex subgroups, bounded-power sets, and Archimedean checks at scale.

A subgroup is convex for an order when it is an interval; convexity is
what makes the induced order on cosets well defined.  Exact answers are
available for lattice orders (where the maximal proper convex subgroup is
computable); everything else is reported tri-state over a ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .groups import Ball, FreeAbelian, Group
from .intmat import vec_dot
from .orders import LESS, GREATER, OrderOracle
from .reports import (
    FAILS_AT_SCALE,
    HOLDS_AT_SCALE,
    InstanceOutcome,
    ScaleReport,
    build_table,
)


@dataclass(frozen=True, eq=False)
class SubgroupOracle:
    """Subgroup given by a decidable membership predicate."""

    group: Group
    contains: Callable
    descriptor: dict
    generators: tuple = ()

    def __contains__(self, g) -> bool:
        return bool(self.contains(g))


def subgroup_from_predicate(group: Group, contains: Callable, descriptor: dict, generators=()) -> SubgroupOracle:
    return SubgroupOracle(group, contains, descriptor, tuple(generators))


def coordinate_zero_subgroup(group: FreeAbelian, zero_coordinates: Sequence[int]) -> SubgroupOracle:
    """Sublattice of Z^n where the listed coordinates vanish."""
    zeros = tuple(sorted(set(zero_coordinates)))
    gens = tuple(
        group._generator(i + 1) for i in range(group.rank) if i not in zeros
    )
    return SubgroupOracle(
        group,
        lambda v: all(v[c] == 0 for c in zeros),
        {"kind": "coordinate_zero", "zero_coordinates": list(zeros)},
        gens,
    )


def kernel_lattice_subgroup(group: FreeAbelian, functional: Sequence[int]) -> SubgroupOracle:
    """The sublattice where an integer functional vanishes."""
    f = tuple(int(x) for x in functional)
    if not any(f):
        raise ValueError("zero functional")
    from .indicability import kernel_lattice_basis

    basis = kernel_lattice_basis(f)
    return SubgroupOracle(
        group,
        lambda v: vec_dot(f, v) == 0,
        {"kind": "kernel_lattice", "functional": list(f)},
        tuple(basis),
    )


def klein_a_axis(group) -> SubgroupOracle:
    """The <a> subgroup of the Klein bottle group (b-exponent zero)."""
    return SubgroupOracle(
        group,
        lambda g: g[1] == 0,
        {"kind": "klein_a_axis"},
        ((1, 0),),
    )


@dataclass
class ConvexityReport:
    convex: bool
    radius: int
    checked_pairs: int
    violation: tuple | None = None  # (gamma, lambda) with e < gamma < lambda, lambda in, gamma out
    violation_display: dict | None = None

    def to_json(self) -> dict:
        return {
            "convex": self.convex,
            "radius": self.radius,
            "checked_pairs": self.checked_pairs,
            "violation": self.violation_display,
        }


class NonConvexSubgroup(ValueError):
    """Raised when an operation requires convexity the subgroup lacks."""

    def __init__(self, report: ConvexityReport):
        self.report = report
        super().__init__(f"subgroup is not convex at radius {report.radius}")


def convex_at_scale(order: OrderOracle, subgroup: SubgroupOracle, ball: Ball) -> ConvexityReport:
    """Test the interval condition e < gamma < lambda, lambda in the
    subgroup, gamma forced in.  Left invariance reduces general sandwiches
    to this one-sided form."""
    group = order.group
    checked = 0
    members = [g for g in ball if g in subgroup]
    for lam in members:
        if not order.positive(lam):
            continue
        for gamma in ball:
            if gamma == group.identity() or gamma in subgroup:
                continue
            checked += 1
            if order.positive(gamma) and order.compare(gamma, lam) == LESS:
                return ConvexityReport(
                    False,
                    ball.radius,
                    checked,
                    (gamma, lam),
                    {
                        "gamma": group.describe(gamma),
                        "lambda": group.describe(lam),
                    },
                )
    return ConvexityReport(True, ball.radius, checked)


def bounded_power_set(order: OrderOracle, gamma, ball: Ball, bound: int) -> list:
    """Ball elements whose powers up to the bound all stay below gamma.

    A shrinking over-approximation (in the bound) of the set of elements
    all of whose integer powers are below gamma.  Closed under inversion.
    """
    group = order.group
    if not order.positive(gamma):
        raise ValueError("gamma must be positive")
    out = []
    for lam in ball:
        ok = True
        power = group.identity()
        inv_power = group.identity()
        lam_inv = group.inverse(lam)
        for _ in range(1, bound + 1):
            power = group.multiply(power, lam)
            inv_power = group.multiply(inv_power, lam_inv)
            if order.compare(power, gamma) != LESS or order.compare(inv_power, gamma) != LESS:
                ok = False
                break
        if ok:
            out.append(lam)
    return out


def archimedean_at_scale(order: OrderOracle, ball: Ball, bound: int) -> ScaleReport:
    """For nontrivial gamma, lambda search |n| <= bound with gamma <= lambda^n."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    group = order.group
    e = group.identity()
    nontrivial = [g for g in ball if g != e]
    outcomes = []
    held = failed = 0
    for gamma in nontrivial:
        for lam in nontrivial:
            witness = None
            for n in range(-bound, bound + 1):
                if order.compare(gamma, group.power(lam, n)) != GREATER:
                    witness = n
                    break
            ok = witness is not None
            held += ok
            failed += not ok
            outcomes.append(
                InstanceOutcome(
                    {"gamma": group.describe(gamma), "lambda": group.describe(lam)},
                    ok,
                    witness,
                )
            )
    table, truncated = build_table(outcomes)
    return ScaleReport(
        kind="archimedean",
        status=HOLDS_AT_SCALE if failed == 0 else FAILS_AT_SCALE,
        bound=bound,
        total=len(outcomes),
        held=held,
        failed=failed,
        table=table,
        truncated=truncated,
    )


@dataclass
class CosetOrderReport:
    well_defined: bool
    radius: int
    coset_count: int
    comparisons_checked: int
    violation: dict | None = None

    def to_json(self) -> dict:
        return {
            "well_defined": self.well_defined,
            "radius": self.radius,
            "coset_count": self.coset_count,
            "comparisons_checked": self.comparisons_checked,
            "violation": self.violation,
        }


def coset_chain_check(order: OrderOracle, subgroup: SubgroupOracle, ball: Ball) -> CosetOrderReport:
    """Verify the order induced on left cosets is well defined on the ball.

    Refuses (NonConvexSubgroup) when the subgroup fails the convexity test,
    since only convex subgroups order their cosets.  For distinct cosets
    the comparison must not depend on the representatives (each coset is an
    interval); same-coset pairs are equal by definition.
    """
    convexity = convex_at_scale(order, subgroup, ball)
    if not convexity.convex:
        raise NonConvexSubgroup(convexity)
    group = order.group
    cosets: dict = {}
    for g in ball:
        for rep in cosets:
            if group.multiply(group.inverse(rep), g) in subgroup:
                cosets[rep].append(g)
                break
        else:
            cosets[g] = [g]
    reps = list(cosets)
    checked = 0
    for i, r1 in enumerate(reps):
        for r2 in reps[i + 1:]:
            base = order.compare(r1, r2)
            for g1 in cosets[r1]:
                for g2 in cosets[r2]:
                    checked += 1
                    if order.compare(g1, g2) != base:
                        return CosetOrderReport(
                            False,
                            ball.radius,
                            len(reps),
                            checked,
                            {
                                "coset_1": group.describe(r1),
                                "coset_2": group.describe(r2),
                                "representatives": [
                                    group.describe(g1),
                                    group.describe(g2),
                                ],
                            },
                        )
    return CosetOrderReport(True, ball.radius, len(reps), checked)


def maximal_convex_subgroup_zn(order: OrderOracle) -> SubgroupOracle:
    """Exact maximal proper convex subgroup for lattice orders.

    Lexicographic orders drop their most significant coordinate; functional
    orders with lex tie-break have the kernel lattice.  Other descriptors
    are refused rather than guessed.
    """
    group = order.group
    if not isinstance(group, FreeAbelian):
        raise ValueError("exact maximal convex subgroups are only computed on Z^n")
    descr = order.descriptor
    kind = descr.get("kind")
    if kind == "lex_zn":
        dominant = descr["priority"][0]
        return coordinate_zero_subgroup(group, [dominant])
    if kind == "functional_lex_zn":
        return kernel_lattice_subgroup(group, descr["functional"])
    raise ValueError(f"no exact maximal convex subgroup for order kind {kind!r}")
