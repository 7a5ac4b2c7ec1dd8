"""Infinite cyclic quotients of finitely presented groups, via Smith normal form.

The abelianization of <x_1..x_k | r_1..r_m> is the cokernel of the relator
exponent-sum matrix; its free rank is positive exactly when the group
surjects onto Z, and a surjection witness is read off the column
transform of the Smith normal form.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .intmat import Matrix, as_matrix, det, identity as identity_matrix, mat_mul

Word = tuple[int, ...]


@dataclass(frozen=True)
class Presentation:
    """Generator count plus relator words (signed 1-based indices)."""

    generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        if self.generators < 1:
            raise ValueError("need at least one generator")
        for rel in self.relators:
            for x in rel:
                if x == 0 or abs(x) > self.generators:
                    raise ValueError(f"relator letter {x} out of range")

    @classmethod
    def from_lists(cls, generators: int, relators: Sequence[Sequence[int]]) -> "Presentation":
        return cls(generators, tuple(tuple(int(x) for x in r) for r in relators))

    def exponent_matrix(self) -> Matrix:
        """Rows are relators, columns are generators (exponent sums)."""
        rows = []
        for rel in self.relators:
            row = [0] * self.generators
            for x in rel:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class SNFResult:
    """Diagonalization U*M*V = diag(invariants) by unimodular U, V.

    ``invariants`` are the nonzero diagonal entries in divisibility order;
    ``free_rank`` is the number of zero columns of the diagonal, i.e. the
    free rank of the cokernel; ``torsion`` the invariants above 1.
    """

    matrix: Matrix
    invariants: tuple[int, ...]
    u: Matrix
    v: Matrix
    rows: int
    cols: int

    @property
    def free_rank(self) -> int:
        return self.cols - len(self.invariants)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)

    def diagonal_matrix(self) -> Matrix:
        return tuple(
            tuple(
                self.invariants[i] if i == j and i < len(self.invariants) else 0
                for j in range(self.cols)
            )
            for i in range(self.rows)
        )

    def group_description(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "trivial"

    def to_json(self) -> dict:
        return {
            "invariants": list(self.invariants),
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "u": [list(r) for r in self.u],
            "v": [list(r) for r in self.v],
        }


def smith_normal_form(matrix) -> SNFResult:
    """Exact Smith normal form with transformation witnesses.

    Pivoting takes the smallest nonzero absolute value (row-major
    tie-break), which keeps entry growth tame and the output reproducible.
    The identity U*M*V = D is checked before returning.
    """
    m0 = as_matrix(matrix)
    rows = len(m0)
    cols = len(m0[0]) if rows else 0
    a = [list(r) for r in m0]
    u = [list(r) for r in identity_matrix(rows)] if rows else []
    v = [list(r) for r in identity_matrix(cols)] if cols else []

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def round_div(x, y):
        # quotient minimizing the remainder |x - q*y|; curbs entry growth
        q, r = divmod(x, y)
        if 2 * abs(r) > abs(y):
            q += 1
        return q

    t = 0
    while t < rows and t < cols:
        while True:
            # re-select the smallest |entry| of the trailing block each pass
            # (Havas-style pivoting keeps intermediate entries small)
            pivot = None
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best):
                        best = abs(x)
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_op(i, t, round_div(a[i][t], a[t][t]))
                    dirty = dirty or bool(a[i][t])
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_op(j, t, round_div(a[t][j], a[t][t]))
                    dirty = dirty or bool(a[t][j])
            if dirty:
                continue  # smaller remainders exist; re-pivot on them
            # divisibility: fold any non-multiple into the pivot's row
            fixed = False
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t]:
                        row_op(t, i, -1)  # add row i to row t
                        fixed = True
                        break
                if fixed:
                    break
            if not fixed:
                break
        if a[t][t] == 0:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    invariants = tuple(a[i][i] for i in range(t))
    result = SNFResult(
        m0,
        invariants,
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in v),
        rows,
        cols,
    )
    _verify_snf(result)
    return result


def _verify_snf(result: SNFResult) -> None:
    if result.rows == 0 or result.cols == 0:
        return
    product = mat_mul(mat_mul(result.u, result.matrix), result.v)
    if product != result.diagonal_matrix():
        raise AssertionError("Smith normal form identity U*M*V = D failed")
    if det(result.u) not in (1, -1) or det(result.v) not in (1, -1):
        raise AssertionError("Smith transform is not unimodular")
    for d1, d2 in zip(result.invariants, result.invariants[1:]):
        if d2 % d1:
            raise AssertionError("divisibility chain broken")


def abelianization(presentation: Presentation) -> SNFResult:
    """Smith data of the relator exponent matrix; cokernel = abelianization."""
    matrix = presentation.exponent_matrix()
    if not matrix:
        matrix = ((0,) * presentation.generators,)
    return smith_normal_form(matrix)


def has_infinite_cyclic_quotient(presentation: Presentation) -> bool:
    return abelianization(presentation).free_rank >= 1


def z_quotient_witness(presentation: Presentation) -> tuple[int, ...] | None:
    """Generator images of a homomorphism onto a finite-index subgroup of Z.

    Reads a kernel column of the Smith column transform; the witness is
    verified against every relator before being returned.  None when the
    abelianization has free rank 0.
    """
    snf = abelianization(presentation)
    if snf.free_rank < 1:
        return None
    col = len(snf.invariants)  # first zero column of the diagonal
    phi = tuple(snf.v[r][col] for r in range(snf.cols))
    g = 0
    for x in phi:
        g = gcd(g, abs(x))
    if g > 1:
        phi = tuple(x // g for x in phi)
    for x in phi:
        if x:
            if x < 0:
                phi = tuple(-y for y in phi)
            break
    for rel in presentation.exponent_matrix():
        if sum(r * p for r, p in zip(rel, phi)) != 0:
            raise AssertionError("witness fails to annihilate a relator")
    if not any(phi):
        raise AssertionError("witness is zero despite positive free rank")
    return phi


def kernel_lattice_basis(functional: Sequence[int]) -> list[tuple[int, ...]]:
    """Basis of the sublattice of Z^n where an integer functional vanishes."""
    f = tuple(int(x) for x in functional)
    if not any(f):
        raise ValueError("zero functional")
    snf = smith_normal_form((f,))
    basis = []
    for col in range(len(snf.invariants), snf.cols):
        vec = tuple(snf.v[r][col] for r in range(snf.cols))
        basis.append(vec)
    return basis
