"""Exact integer matrix/vector helpers on immutable tuples.

Everything here is arbitrary-precision integer arithmetic: no floats, no
rounding.  Matrices are tuples of row tuples, vectors are flat tuples.
"""

from __future__ import annotations

from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise ValueError("ragged matrix")
    return out


def as_vector(entries: Sequence[int]) -> Vector:
    return tuple(int(x) for x in entries)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def is_identity(m: Matrix) -> bool:
    return m == identity(len(m))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    if len(a[0]) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_neg(u: Vector) -> Vector:
    return tuple(-x for x in u)


def vec_dot(u: Vector, v: Vector) -> int:
    return sum(x * y for x, y in zip(u, v))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def det(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of non-square matrix")
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _minor(a: Matrix, drop_row: int, drop_col: int) -> Matrix:
    return tuple(
        tuple(x for j, x in enumerate(row) if j != drop_col)
        for i, row in enumerate(a)
        if i != drop_row
    )


def adjugate(a: Matrix) -> Matrix:
    n = len(a)
    if n == 1:
        return ((1,),)
    return tuple(
        tuple((-1) ** (i + j) * det(_minor(a, j, i)) for j in range(n))
        for i in range(n)
    )


def mat_inverse_unimodular(a: Matrix) -> Matrix:
    """Inverse of an integer matrix with determinant +-1 (exact over Z)."""
    d = det(a)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {d})")
    adj = adjugate(a)
    if d == 1:
        return adj
    return tuple(tuple(-x for x in row) for row in adj)


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        return mat_pow(mat_inverse_unimodular(a), -k)
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result
