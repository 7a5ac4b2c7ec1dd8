"""Finite-scale exploration of the space of left orders.

Everything here works on sign assignments over a Cayley ball, closed under
the two positive-cone axioms:

* antisymmetry: g and g^-1 carry opposite signs;
* closure: two positives multiply to a positive when the product stays in
  the ball (dually for negatives); a product equal to the identity with
  matching signs is a contradiction.

Emptiness results are constructive: they come with a replayable derivation
log (see `certcheck` for the independent checker).  A "consistent at
radius r" verdict is an over-approximation -- it never claims that a cone
extends to a genuine order of the infinite group.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Sequence

from . import _kernel
from .groups import Ball, Group
from .orders import OrderedChain, PartialCone, as_chain

STATUS_CONSISTENT = "consistent_at_radius"
STATUS_EMPTY = "empty_at_radius"
STATUS_INCONCLUSIVE = "inconclusive"

_CONFLICT_NAMES = {
    _kernel.CONFLICT_ANTISYMMETRY: "antisymmetry",
    _kernel.CONFLICT_IDENTITY: "identity_product",
    _kernel.CONFLICT_CLOSURE: "closure_conflict",
}


@dataclass(frozen=True)
class Contradiction:
    """Why a sign assignment is inconsistent, naming the witnessing indices."""

    kind: str
    elements: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": self.kind, "elements": list(self.elements)}


@dataclass(frozen=True)
class DerivationStep:
    """One forced sign: the rule used and the indices justifying it."""

    element: int
    sign: int
    rule: str  # "antisymmetry" | "closure"
    premises: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "element": self.element,
            "sign": self.sign,
            "rule": self.rule,
            "premises": list(self.premises),
        }


@dataclass(frozen=True)
class BranchRecord:
    """A root-to-leaf path of the decision tree ending in a contradiction.

    ``decisions`` is the full assumption stack (index, sign); ``steps`` are
    every sign forced along the way, in derivation order.
    """

    decisions: tuple[tuple[int, int], ...]
    steps: tuple[DerivationStep, ...]
    contradiction: Contradiction

    def to_json(self) -> dict:
        return {
            "decisions": [list(d) for d in self.decisions],
            "steps": [s.to_json() for s in self.steps],
            "contradiction": self.contradiction.to_json(),
        }


@dataclass(frozen=True)
class NonOrderabilityCertificate:
    """Replayable proof that no complete consistent cone exists on a ball.

    Branches cover the whole binary decision tree; each replays to a
    contradiction from the seeds and its own assumptions alone.
    """

    group_spec: dict
    radius: int
    variables_radius: int  # ball the indices refer to (2*radius in strong mode)
    seeds: tuple[tuple[int, int], ...]
    branches: tuple[BranchRecord, ...]
    elements: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "group": self.group_spec,
            "radius": self.radius,
            "variables_radius": self.variables_radius,
            "seeds": [list(s) for s in self.seeds],
            "branches": [b.to_json() for b in self.branches],
            "elements": list(self.elements),
        }


@dataclass
class SearchResult:
    status: str
    radius: int
    witness: PartialCone | None = None
    certificate: NonOrderabilityCertificate | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status, "radius": self.radius, "note": self.note}
        if self.witness is not None:
            out["witness"] = list(self.witness.signs)
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


@dataclass
class ConeEnumeration:
    group: Group
    radius: int
    strong: bool
    cones: list[PartialCone]
    complete: bool
    limit: int | None = None

    def __len__(self) -> int:
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones)

    def signatures(self) -> list[tuple]:
        return [c.signature() for c in self.cones]


@dataclass
class _Tables:
    """Flat arrays the kernel consumes.

    In weak mode the variables are the radius-r ball itself.  In strong
    mode the variables live on ball(2r) -- products of ball(r) elements
    always land there, so their signs are constrained transitively -- while
    branching and completeness still only concern the ball(r) variables.
    """

    ball: Ball           # where the answer lives (radius r)
    var_ball: Ball       # where the variables live (radius r or 2r)
    n: int
    e: int
    inv: array
    prod: array
    decisions: list[int]
    projection: list[int]  # var index for each ball(r) index


def _build_tables(group: Group, radius: int, strong: bool) -> _Tables:
    ball = group.ball(radius)
    var_ball = group.ball(2 * radius) if strong and radius > 0 else ball
    n = len(var_ball)
    inv = array("i", var_ball.inverse_table())
    prod = var_ball.product_table()
    if var_ball is ball:
        projection = list(range(len(ball)))
    else:
        projection = [var_ball.index_of(g) for g in ball.elements]
    decisions = [projection[i] for i in range(len(ball)) if i != ball.identity_index]
    return _Tables(ball, var_ball, n, var_ball.identity_index, inv, prod, decisions, projection)


def _project_solution(tables: _Tables, solution: Sequence[int]) -> PartialCone:
    signs = [solution[tables.projection[i]] for i in range(len(tables.ball))]
    signs[tables.ball.identity_index] = 0
    return PartialCone(tables.ball, signs)


# ---------------------------------------------------------------------------
# propagation on a PartialCone (public least-fixed-point operation)
# ---------------------------------------------------------------------------


def propagate(cone: PartialCone) -> PartialCone | Contradiction:
    """Least fixed point of the cone axioms over the cone's ball.

    Returns a new closed cone, or a Contradiction naming the offending
    indices.  Idempotent and monotone in the known signs.
    """
    ball = cone.ball
    n = len(ball)
    signs = list(cone.signs)
    queue = [i for i, s in enumerate(signs) if s != 0]
    trail: list[int] = []
    conflict = _kernel.propagate(
        n, ball.identity_index, array("i", ball.inverse_table()), ball.product_table(), signs, queue, trail
    )
    if conflict is not None:
        kind, i, j, p = conflict
        elements = (i, j) if p < 0 else (i, j, p)
        return Contradiction(_CONFLICT_NAMES[kind], elements)
    return PartialCone(ball, signs)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _enumerate_job(payload):
    (n, e, inv, prod, decisions, seeds, solution_limit, node_budget) = payload
    return _kernel.enumerate_complete(
        n, e, inv, prod, decisions, seeds, solution_limit, node_budget
    )


def enumerate_cones(
    group: Group,
    radius: int,
    limit: int | None = None,
    strong: bool = False,
    workers: int = 1,
    node_budget: int = 0,
    cap: int | None = None,
) -> ConeEnumeration:
    """All complete consistent sign assignments on ball(radius).

    Output is deduplicated and sorted by sign vector, so it is identical
    across runs and worker counts.  Every restriction of a genuine left
    order appears (soundness); listed cones need not extend to one.
    With ``limit`` set, enumeration stops early and the result is marked
    incomplete, carrying the partial list.
    """
    tables = _build_tables(group, radius, strong)
    if workers > 1 and limit is None and node_budget == 0:
        status, solutions = _enumerate_parallel(tables, workers)
    else:
        status, solutions = _kernel.enumerate_complete(
            tables.n,
            tables.e,
            tables.inv,
            tables.prod,
            tables.decisions,
            [],
            limit or 0,
            node_budget,
        )
    cones = {}
    for sol in solutions:
        cone = _project_solution(tables, sol)
        cones[cone.signature()] = cone
    ordered = [cones[sig] for sig in sorted(cones)]
    return ConeEnumeration(
        group,
        radius,
        strong,
        ordered,
        complete=(status == _kernel.STATUS_DONE),
        limit=limit,
    )


def _enumerate_parallel(tables: _Tables, workers: int):
    """Split the search tree at the root and farm subtrees to processes."""
    from concurrent.futures import ProcessPoolExecutor
    from itertools import product as iproduct

    depth = 0
    while 2**depth < 4 * workers and depth < min(10, len(tables.decisions)):
        depth += 1
    roots = tables.decisions[:depth]
    jobs = []
    for combo in iproduct((1, -1), repeat=len(roots)):
        seeds = list(zip(roots, combo))
        jobs.append(
            (
                tables.n,
                tables.e,
                tables.inv,
                tables.prod,
                tables.decisions,
                seeds,
                0,
                0,
            )
        )
    status = _kernel.STATUS_DONE
    solutions = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for job_status, sols in pool.map(_enumerate_job, jobs):
            solutions.extend(sols)
            if job_status != _kernel.STATUS_DONE:
                status = job_status
    return status, solutions


# ---------------------------------------------------------------------------
# basic open sets and refutation
# ---------------------------------------------------------------------------


def _chain_seeds(tables: _Tables, chain: OrderedChain) -> list[tuple[int, int]]:
    group = tables.ball.group
    seeds = []
    for a, b in zip(chain.elements, chain.elements[1:]):
        for x in (a, b):
            if x not in tables.ball:
                raise KeyError(
                    f"chain element {group.describe(x)} outside ball({tables.ball.radius})"
                )
        q = group.multiply(group.inverse(a), b)
        if q not in tables.var_ball:
            raise KeyError(
                f"chain quotient {group.describe(q)} outside ball({tables.ball.radius})"
            )
        seeds.append((tables.var_ball.index_of(q), 1))
    return seeds


def basic_open_nonempty_at_radius(
    group: Group,
    radius: int,
    chain,
    strong: bool = False,
    node_budget: int = 0,
) -> SearchResult:
    """Search for a complete consistent cone containing a chain's constraints.

    Emptiness certifies that the basic open set of the order space cut out
    by the chain is empty; consistency is only a radius-r non-refutation.
    """
    chain = as_chain(chain)
    tables = _build_tables(group, radius, strong)
    seeds = _chain_seeds(tables, chain)
    status, solutions = _kernel.enumerate_complete(
        tables.n,
        tables.e,
        tables.inv,
        tables.prod,
        tables.decisions,
        seeds,
        0,
        node_budget,
        True,
    )
    if solutions:
        return SearchResult(
            STATUS_CONSISTENT,
            radius,
            witness=_project_solution(tables, solutions[0]),
            note="consistent at this radius; existence of a genuine order is not claimed",
        )
    if status != _kernel.STATUS_DONE:
        return SearchResult(STATUS_INCONCLUSIVE, radius, note="node budget exhausted")
    branches = _logged_refutation(tables, seeds)
    cert = NonOrderabilityCertificate(
        group.spec(),
        radius,
        tables.var_ball.radius,
        tuple(seeds),
        branches,
        tuple(tables.var_ball.describe(i) for i in range(tables.n)),
    )
    return SearchResult(STATUS_EMPTY, radius, certificate=cert)


@dataclass
class RefutationResult:
    status: str  # "refuted" | "inconclusive"
    r_max: int
    radius: int | None = None
    certificate: NonOrderabilityCertificate | None = None
    witness: PartialCone | None = None
    note: str = ""


def refute_left_orderability(
    group: Group,
    r_max: int,
    node_budget: int = 0,
    cap: int | None = None,
) -> RefutationResult:
    """Look for a radius at which no complete consistent cone exists.

    A certificate refutes left-orderability outright.  An inconclusive
    answer means consistent cones survive at r_max; the group may or may
    not be left-orderable (this is a one-sided test).
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    witness = None
    for radius in range(1, r_max + 1):
        tables = _build_tables(group, radius, strong=False)
        status, solutions = _kernel.enumerate_complete(
            tables.n,
            tables.e,
            tables.inv,
            tables.prod,
            tables.decisions,
            [],
            0,
            node_budget,
            True,
        )
        if solutions:
            witness = _project_solution(tables, solutions[0])
            continue
        if status != _kernel.STATUS_DONE:
            return RefutationResult(
                "inconclusive", r_max, note=f"node budget exhausted at radius {radius}"
            )
        branches = _logged_refutation(tables, [])
        cert = NonOrderabilityCertificate(
            group.spec(),
            radius,
            tables.var_ball.radius,
            (),
            branches,
            tuple(tables.var_ball.describe(i) for i in range(tables.n)),
        )
        return RefutationResult("refuted", r_max, radius=radius, certificate=cert)
    return RefutationResult(
        "inconclusive",
        r_max,
        witness=witness,
        note=f"consistent cones exist at radius {r_max}",
    )


# ---------------------------------------------------------------------------
# logged derivation search (certificate construction)
# ---------------------------------------------------------------------------


def _propagate_logged(tables: _Tables, signs: list, queue: list, steps: list) -> Contradiction | None:
    """Same fixed point as the kernel, recording each forced sign."""
    n, e, inv, prod = tables.n, tables.e, tables.inv, tables.prod
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        s = signs[i]
        j = inv[i]
        if signs[j] == s:
            return Contradiction("antisymmetry", (i, j))
        if signs[j] == 0:
            signs[j] = -s
            steps.append(DerivationStep(j, -s, "antisymmetry", (i,)))
            queue.append(j)
        for k in range(n):
            if signs[k] != s:
                continue
            for a, b in ((i, k), (k, i)):
                p = prod[a * n + b]
                if p < 0:
                    continue
                if p == e:
                    return Contradiction("identity_product", (a, b))
                sp = signs[p]
                if sp == -s:
                    return Contradiction("closure_conflict", (a, b, p))
                if sp == 0:
                    signs[p] = s
                    steps.append(DerivationStep(p, s, "closure", (a, b)))
                    queue.append(p)
    return None


def _logged_refutation(tables: _Tables, seeds: Sequence[tuple[int, int]]) -> tuple[BranchRecord, ...]:
    """Record the full decision tree of a failed search.

    Precondition: the fast search already found the tree contradictory.
    Each branch record is self-contained (all steps since the root), so the
    checker can replay branches independently.
    """
    branches: list[BranchRecord] = []
    signs0 = [0] * tables.n
    steps0: list[DerivationStep] = []
    queue = []
    for i, s in seeds:
        if signs0[i] == -s:
            branches.append(
                BranchRecord((), tuple(steps0), Contradiction("antisymmetry", (i, tables.inv[i])))
            )
            return tuple(branches)
        if signs0[i] == 0:
            signs0[i] = s
            queue.append(i)
    conflict = _propagate_logged(tables, signs0, queue, steps0)
    if conflict is not None:
        return (BranchRecord((), tuple(steps0), conflict),)

    def next_unassigned(signs, start):
        for t in range(start, len(tables.decisions)):
            if signs[tables.decisions[t]] == 0:
                return t
        return -1

    def explore(decisions, signs, steps, t_start) -> bool:
        """Return True if every leaf below is contradictory."""
        t = next_unassigned(signs, t_start)
        if t < 0:
            return False  # complete consistent cone: not a refutation
        v = tables.decisions[t]
        for sign in (1, -1):
            signs2 = list(signs)
            steps2 = list(steps)
            signs2[v] = sign
            decisions2 = decisions + ((v, sign),)
            conflict = _propagate_logged(tables, signs2, [v], steps2)
            if conflict is None:
                if not explore(decisions2, signs2, steps2, t + 1):
                    return False
            else:
                branches.append(BranchRecord(decisions2, tuple(steps2), conflict))
        return True

    if not explore((), signs0, steps0, 0):
        raise RuntimeError("logged search found a consistent cone; refutation retracted")
    return tuple(branches)
