"""Independent replay of certificates.

The checkers here deliberately avoid the search machinery: they rebuild
the ball from the group alone, validate every logged inference by direct
multiplication of canonical forms, and verify that the recorded branches
cover the whole decision tree.  A certificate that passes replays as a
self-contained proof.
"""

from __future__ import annotations

from .groups import group_from_spec
from .orders import OrderedChain, from_descriptor
from .intmat import mat_vec, vec_dot


class CertificateError(AssertionError):
    """A certificate failed to replay."""


# ---------------------------------------------------------------------------
# non-left-orderability derivations
# ---------------------------------------------------------------------------


def check_nonorderability_certificate(cert, group=None) -> bool:
    """Replay a non-orderability derivation from scratch.

    Verifies: every step is a valid application of its cited axiom, every
    branch ends in a genuine contradiction, and the branch assumptions form
    a complete binary tree (so no sign assignment escapes).
    """
    if group is None:
        group = group_from_spec(cert.group_spec)
    ball = group.ball(cert.variables_radius)
    if len(ball) != len(cert.elements):
        raise CertificateError(
            f"ball size {len(ball)} does not match certificate legend {len(cert.elements)}"
        )
    n = len(ball)
    e = ball.identity_index
    elements = ball.elements
    identity = group.identity()

    def replay_branch(branch) -> None:
        signs: dict[int, int] = {}
        for i, s in cert.seeds:
            if signs.get(i, s) != s:
                raise CertificateError("contradictory seeds replayed without derivation")
            signs[i] = s
        for i, s in branch.decisions:
            if i == e or not 0 <= i < n:
                raise CertificateError(f"decision on invalid index {i}")
            if signs.get(i, s) != s:
                raise CertificateError("decision clashes with existing sign")
            signs[i] = s
        for step in branch.steps:
            _check_step(step, signs)
        _check_contradiction(branch.contradiction, signs)

    def _check_step(step, signs) -> None:
        if step.element == e or not 0 <= step.element < n:
            raise CertificateError(f"step assigns invalid index {step.element}")
        if step.rule == "antisymmetry":
            (i,) = step.premises
            si = signs.get(i)
            if si is None:
                raise CertificateError("antisymmetry premise not yet assigned")
            if group.inverse(elements[i]) != elements[step.element]:
                raise CertificateError("antisymmetry step does not point at the inverse")
            if step.sign != -si:
                raise CertificateError("antisymmetry step has wrong sign")
        elif step.rule == "closure":
            i, j = step.premises
            si, sj = signs.get(i), signs.get(j)
            if si is None or sj is None or si != sj:
                raise CertificateError("closure premises not assigned with equal signs")
            prod = group.multiply(elements[i], elements[j])
            if prod != elements[step.element]:
                raise CertificateError("closure step product mismatch")
            if step.sign != si:
                raise CertificateError("closure step has wrong sign")
        else:
            raise CertificateError(f"unknown rule {step.rule!r}")
        prev = signs.get(step.element)
        if prev is not None and prev != step.sign:
            raise CertificateError("step overwrites an opposite sign without conflict")
        signs[step.element] = step.sign

    def _check_contradiction(contradiction, signs) -> None:
        kind = contradiction.kind
        idx = contradiction.elements
        if kind == "antisymmetry":
            i, j = idx
            if group.inverse(elements[i]) != elements[j]:
                raise CertificateError("antisymmetry contradiction is not an inverse pair")
            if signs.get(i) is None or signs.get(i) != signs.get(j):
                raise CertificateError("antisymmetry contradiction signs do not match")
        elif kind == "identity_product":
            i, j = idx
            if group.multiply(elements[i], elements[j]) != identity:
                raise CertificateError("identity-product contradiction product is not e")
            if signs.get(i) is None or signs.get(i) != signs.get(j):
                raise CertificateError("identity-product contradiction signs do not match")
        elif kind == "closure_conflict":
            i, j, p = idx
            if group.multiply(elements[i], elements[j]) != elements[p]:
                raise CertificateError("closure contradiction product mismatch")
            si = signs.get(i)
            if si is None or signs.get(j) != si or signs.get(p) != -si:
                raise CertificateError("closure contradiction signs do not match")
        else:
            raise CertificateError(f"unknown contradiction kind {kind!r}")

    for branch in cert.branches:
        replay_branch(branch)

    _check_tree_complete(cert.branches)
    return True


def _check_tree_complete(branches) -> None:
    """The branch assumption stacks must form a full binary decision tree."""

    def verify(group_branches, depth) -> None:
        leaves = [b for b in group_branches if len(b.decisions) == depth]
        if leaves:
            if len(group_branches) != 1:
                raise CertificateError("branch is both a leaf and an interior node")
            return
        if not group_branches:
            raise CertificateError("decision tree has an uncovered path")
        nexts = {b.decisions[depth] for b in group_branches}
        variables = {i for i, _ in nexts}
        if len(variables) != 1:
            raise CertificateError("siblings branch on different variables")
        (var,) = variables
        if nexts != {(var, 1), (var, -1)}:
            raise CertificateError("branch tree misses a sign of its decision variable")
        for sign in (1, -1):
            verify(
                [b for b in group_branches if b.decisions[depth] == (var, sign)],
                depth + 1,
            )

    verify(list(branches), 0)


# ---------------------------------------------------------------------------
# non-recurrence (invariant cone) certificates
# ---------------------------------------------------------------------------


def check_non_recurrence_certificate(cert, witness_bound: int = 50) -> bool:
    """Replay an invariant-orthant non-recurrence certificate.

    Recomputes the orbit prefix with integer matrix iteration, re-derives
    orthant invariance from the entrywise signs of the acting matrix, checks
    that orthant membership kills positivity of the conjugates, and then
    confirms that the recurrence witness set is empty up to witness_bound.
    """
    from .dynamics import recurrence_witnesses  # local import to avoid a cycle

    group = group_from_spec(cert.group_spec)
    oracle = from_descriptor(group, cert.order_descriptor)
    t_matrix = tuple(tuple(row) for row in cert.matrix)
    v = tuple(cert.start_vector)
    orthant = tuple(cert.orthant)

    if any(x <= 0 for x in (vec_dot(cert.functional, v),)):
        raise CertificateError("starting vector is not on the positive side of the functional")

    # orthant invariance from entry signs: a nonnegative matrix maps the
    # strictly negative (and strictly positive) quadrant into itself
    if any(x < 0 for row in t_matrix for x in row):
        raise CertificateError("matrix has negative entries; orthant argument unavailable")
    if any(all(x == 0 for x in row) for row in t_matrix):
        raise CertificateError("matrix has a zero row; orthant is not preserved strictly")
    if set(orthant) != {-1} and set(orthant) != {1}:
        raise CertificateError(f"unsupported orthant {orthant!r}")

    w = v
    prefix = []
    for _ in range(cert.threshold):
        w = mat_vec(t_matrix, w)
        prefix.append(w)
    if [list(p) for p in prefix] != [list(p) for p in cert.orbit_prefix]:
        raise CertificateError("orbit prefix does not replay")
    landing = prefix[-1]
    if not all(x * orthant[i] > 0 for i, x in enumerate(landing)):
        raise CertificateError("orbit does not land strictly inside the invariant orthant")

    # inside the orthant the fiber functional is strictly negative
    f = tuple(cert.functional)
    if not all(f[i] * orthant[i] <= 0 for i in range(len(f))) or not any(f):
        raise CertificateError("functional is not negative on the invariant orthant")

    # the finitely many earlier conjugates must already be non-positive
    fiber = group.fiber_group()
    fiber_oracle = from_descriptor(fiber, cert.order_descriptor["fiber"])
    for w in prefix:
        if fiber_oracle.positive(w):
            raise CertificateError("an orbit-prefix point is positive; witnesses nonempty")

    gamma = group.evaluate_word(cert.gamma_word)
    v_bar = (group.identity()[0], v)
    chain = OrderedChain((group.identity(), v_bar))
    witnesses = recurrence_witnesses(oracle, gamma, chain, witness_bound, cross_check=False)
    if witnesses:
        raise CertificateError(f"recurrence witnesses found on replay: {witnesses}")
    return True
