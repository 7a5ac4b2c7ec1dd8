"""Independent brute-force oracles used to validate the main code paths.

These deliberately avoid the package's search/SNF machinery: cones are
enumerated by trying every sign assignment and checking the axioms from
raw group multiplication, and Smith invariants come from gcds of minors.
"""

from itertools import combinations, product
from math import gcd


def brute_force_cones(ball):
    """Every complete consistent sign assignment on a ball, by exhaustion.

    Signs are chosen freely on one representative per inverse pair and
    mirrored; closure is then checked against products recomputed directly
    from the group operation.
    """
    group = ball.group
    e_idx = ball.identity_index
    identity = group.identity()
    n = len(ball)

    pair_rep = {}
    for i in range(n):
        if i == e_idx:
            continue
        j = ball.index_of(group.inverse(ball.element(i)))
        if j == i:
            return []  # a self-inverse element (torsion) kills every assignment
        pair_rep[i] = min(i, j)
    reps = sorted({r for r in pair_rep.values()})

    # products staying inside the ball, recomputed from scratch
    triples = []
    for i in range(n):
        if i == e_idx:
            continue
        for j in range(n):
            if j == e_idx:
                continue
            p = group.multiply(ball.element(i), ball.element(j))
            if p == identity:
                continue  # j is i's inverse; antisymmetry handles it
            k = ball.index.get(p)
            if k is not None:
                triples.append((i, j, k))

    inverse_of = {i: ball.index_of(group.inverse(ball.element(i))) for i in range(n) if i != e_idx}
    solutions = []
    for choice in product((1, -1), repeat=len(reps)):
        signs = [0] * n
        for rep, s in zip(reps, choice):
            signs[rep] = s
            signs[inverse_of[rep]] = -s
        if all(signs[k] == signs[i] for i, j, k in triples if signs[i] == signs[j]):
            solutions.append(tuple(signs))
    return sorted(solutions)


def gcd_of_minors_invariants(matrix):
    """Smith invariants as successive quotients of gcds of k-minors."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0

    def minor_det(row_idx, col_idx):
        sub = [[matrix[i][j] for j in col_idx] for i in row_idx]
        return _det(sub)

    invariants = []
    previous = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for row_idx in combinations(range(rows), k):
            for col_idx in combinations(range(cols), k):
                g = gcd(g, abs(minor_det(row_idx, col_idx)))
        if g == 0:
            break
        invariants.append(g // previous)
        previous = g
    return tuple(invariants)


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(sub)
    return total


def bfs_ball_elements(group, radius):
    """Ball membership recomputed with a plain breadth-first search."""
    steps = []
    for g in group.generators():
        steps.append(g)
        steps.append(group.inverse(g))
    seen = {group.identity()}
    frontier = [group.identity()]
    for _ in range(radius):
        new = []
        for g in frontier:
            for s in steps:
                h = group.multiply(g, s)
                if h not in seen:
                    seen.add(h)
                    new.append(h)
        frontier = new
    return seen
