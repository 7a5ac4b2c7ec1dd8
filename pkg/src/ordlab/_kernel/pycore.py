"""Pure-Python cone-search kernel.

Mirrors the compiled extension `_conecore` exactly; one of the two is
selected at import time in `ordlab._kernel`.  The interface is flat:

* ``n`` ball size, ``e`` identity index,
* ``inv`` length-n sequence of inverse indices,
* ``prod`` flat length n*n sequence; prod[i*n + j] is the index of
  elements[i]*elements[j] in the ball, or -1 if the product falls outside,
* ``signs`` length-n mutable signed array (+1 / -1 / 0 = unknown).

Conflicts are reported as (kind, i, j, p) with kind 1 = antisymmetry
(i and its inverse j share a sign), 2 = identity product (i*j = e with
equal signs), 3 = closure conflict (i*j = p but p carries the flipped
sign); unused slots are -1.
"""

from __future__ import annotations

CONFLICT_ANTISYMMETRY = 1
CONFLICT_IDENTITY = 2
CONFLICT_CLOSURE = 3

STATUS_DONE = 0
STATUS_SOLUTION_LIMIT = 1
STATUS_NODE_BUDGET = 2


def propagate(n, e, inv, prod, signs, queue, trail):
    """Close ``signs`` under antisymmetry and same-sign closure.

    ``queue`` holds indices whose consequences are pending; every new
    assignment is appended to both ``queue`` and ``trail``.  Returns a
    conflict tuple or None.  ``signs`` is mutated in place.
    """
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        s = signs[i]
        j = inv[i]
        sj = signs[j]
        if sj == s:
            return (CONFLICT_ANTISYMMETRY, i, j, -1)
        if sj == 0:
            signs[j] = -s
            trail.append(j)
            queue.append(j)
        base = i * n
        for k in range(n):
            if signs[k] != s:
                continue
            p = prod[base + k]
            if p >= 0:
                if p == e:
                    return (CONFLICT_IDENTITY, i, k, -1)
                sp = signs[p]
                if sp == -s:
                    return (CONFLICT_CLOSURE, i, k, p)
                if sp == 0:
                    signs[p] = s
                    trail.append(p)
                    queue.append(p)
            p = prod[k * n + i]
            if p >= 0:
                if p == e:
                    return (CONFLICT_IDENTITY, k, i, -1)
                sp = signs[p]
                if sp == -s:
                    return (CONFLICT_CLOSURE, k, i, p)
                if sp == 0:
                    signs[p] = s
                    trail.append(p)
                    queue.append(p)
    return None


def enumerate_complete(
    n,
    e,
    inv,
    prod,
    decisions,
    seeds,
    solution_limit=0,
    node_budget=0,
    find_one=False,
):
    """Depth-first enumeration of complete consistent sign assignments.

    ``decisions`` lists the indices that must end up signed (in branch
    order: the first unassigned one is branched on, +1 before -1).
    ``seeds`` is a sequence of (index, sign) constraints.

    Returns (status, solutions): status STATUS_DONE when the tree was
    exhausted, STATUS_SOLUTION_LIMIT / STATUS_NODE_BUDGET when cut short.
    Solutions are full sign tuples in discovery order.
    """
    signs = [0] * n
    trail: list[int] = []
    queue: list[int] = []
    for i, s in seeds:
        cur = signs[i]
        if cur == -s:
            return (STATUS_DONE, [])
        if cur == 0:
            signs[i] = s
            trail.append(i)
            queue.append(i)
    if propagate(n, e, inv, prod, signs, queue, trail) is not None:
        return (STATUS_DONE, [])

    limit = 1 if find_one else solution_limit
    solutions = []
    nodes = 0

    def next_unassigned(start):
        for t in range(start, len(decisions)):
            if signs[decisions[t]] == 0:
                return t
        return -1

    t0 = next_unassigned(0)
    if t0 < 0:
        return (STATUS_DONE, [tuple(signs)])

    # frame: [position in decisions, next sign to try (0 -> +1, 1 -> -1), trail mark]
    stack = [[t0, 0, len(trail)]]
    while stack:
        frame = stack[-1]
        t, state, mark = frame
        while len(trail) > mark:
            signs[trail.pop()] = 0
        if state == 2:
            stack.pop()
            continue
        frame[1] += 1
        sign = 1 if state == 0 else -1
        nodes += 1
        if node_budget and nodes > node_budget:
            return (STATUS_NODE_BUDGET, solutions)
        v = decisions[t]
        signs[v] = sign
        trail.append(v)
        queue = [v]
        if propagate(n, e, inv, prod, signs, queue, trail) is not None:
            continue
        t2 = next_unassigned(t + 1)
        if t2 < 0:
            solutions.append(tuple(signs))
            if limit and len(solutions) >= limit:
                return (STATUS_SOLUTION_LIMIT, solutions)
            continue
        stack.append([t2, 0, len(trail)])
    return (STATUS_DONE, solutions)
