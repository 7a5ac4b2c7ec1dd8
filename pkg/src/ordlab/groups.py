"""Concrete finitely generated groups with canonical normal forms and Cayley balls.

Each backend fixes a canonical form for its elements as a plain hashable
Python value, so element equality is equality of forms:

* free group          -- reduced word, a tuple of nonzero signed 1-based
                         generator indices ((1, -2) means g1 * g2**-1)
* free abelian        -- integer coordinate tuple
* finite cyclic       -- residue in [0, modulus)
* Klein bottle group  -- pair (m, n) for the normal form a^m b^n under the
                         relation b a b^-1 = a^-1
* integer matrices    -- the matrix itself, as a tuple of row tuples
* semidirect product  -- pair (matrix, vector) with (M1, v1)(M2, v2) =
                         (M1 M2, v1 + M1 v2)
* permutations        -- image tuple on {0, ..., degree-1}

Words are sequences of signed 1-based generator indices throughout.
The word metric counts generators and their inverses each as length 1.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from .intmat import (
    Matrix,
    Vector,
    as_matrix,
    as_vector,
    det,
    identity as identity_matrix,
    mat_inverse_unimodular,
    mat_mul,
    mat_vec,
    vec_add,
    vec_neg,
)

Word = tuple[int, ...]

DEFAULT_BALL_CAP = 200_000
BALL_CAP_ENV = "ORDLAB_BALL_CAP"


class BackendMismatch(ValueError):
    """Element is not a canonical form of this group backend."""


class UnknownGenerator(ValueError):
    """Word refers to a generator index outside the generating set."""


class BallCapExceeded(RuntimeError):
    """Cayley ball grew past the configured element cap."""


class NotInSubgroup(ValueError):
    """Matrix is not an element of the free subgroup being rewritten."""


def effective_ball_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(BALL_CAP_ENV)
    return int(env) if env else DEFAULT_BALL_CAP


class Group:
    """Common interface: canonical forms, exact products, Cayley balls."""

    name: str = "group"

    # -- core operations (per backend) -------------------------------------

    def identity(self):
        raise NotImplementedError

    def generator_count(self) -> int:
        raise NotImplementedError

    def generator(self, index: int):
        """Generator for a 1-based index."""
        if not 1 <= index <= self.generator_count():
            raise UnknownGenerator(f"{self.name}: no generator {index}")
        return self._generator(index)

    def _generator(self, index: int):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def check_element(self, a) -> None:
        """Cheap structural check; raises BackendMismatch on foreign values."""
        raise NotImplementedError

    def sort_key(self, a):
        """Deterministic total order on canonical forms (tie-break in balls)."""
        raise NotImplementedError

    def describe(self, a) -> str:
        return repr(a)

    def element_json(self, a):
        """JSON-ready encoding of a canonical form."""
        return a

    def spec(self) -> dict:
        raise NotImplementedError

    # -- shared machinery ---------------------------------------------------

    def generators(self) -> list:
        return [self._generator(i) for i in range(1, self.generator_count() + 1)]

    def evaluate_word(self, word: Sequence[int]):
        out = self.identity()
        for letter in word:
            if letter == 0:
                raise UnknownGenerator(f"{self.name}: zero letter in word")
            gen = self.generator(abs(letter))
            if letter < 0:
                gen = self.inverse(gen)
            out = self.multiply(out, gen)
        return out

    def power(self, a, n: int):
        if n < 0:
            return self.power(self.inverse(a), -n)
        out = self.identity()
        base = a
        while n:
            if n & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            n >>= 1
        return out

    def conjugate(self, g, by):
        """by * g * by^-1."""
        return self.multiply(self.multiply(by, g), self.inverse(by))

    def ball(self, radius: int, cap: int | None = None) -> "Ball":
        """All elements of word length <= radius, in a stable order."""
        if radius < 0:
            raise ValueError("ball radius must be nonnegative")
        cap = effective_ball_cap(cap)
        steps = []
        for g in self.generators():
            steps.append(g)
            inv = self.inverse(g)
            if inv not in steps:
                steps.append(inv)
        lengths = {self.identity(): 0}
        frontier = [self.identity()]
        for dist in range(1, radius + 1):
            new = []
            for g in frontier:
                for s in steps:
                    h = self.multiply(g, s)
                    if h not in lengths:
                        lengths[h] = dist
                        new.append(h)
                        if len(lengths) > cap:
                            raise BallCapExceeded(
                                f"{self.name}: ball({radius}) exceeds cap {cap}"
                            )
            frontier = new
        elements = sorted(lengths, key=lambda g: (lengths[g], self.sort_key(g)))
        return Ball(self, radius, elements, lengths)

    def random_element(self, rng: random.Random, max_length: int = 6):
        k = self.generator_count()
        length = rng.randint(0, max_length)
        word = [rng.choice((1, -1)) * rng.randint(1, k) for _ in range(length)]
        return self.evaluate_word(word)


@dataclass
class Ball:
    """A radius-r Cayley ball: stable element order plus lookup tables.

    Element order is (word length, canonical-form sort key), so it is
    identical across runs.  The identity is always index 0.
    """

    group: Group
    radius: int
    elements: list
    lengths_by_element: dict
    index: dict = field(init=False)
    lengths: list = field(init=False)
    _inverse: list = field(init=False, default=None)
    _products: Any = field(init=False, default=None, repr=False)

    def __post_init__(self):
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.lengths = [self.lengths_by_element[g] for g in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.index

    @property
    def identity_index(self) -> int:
        return 0

    def element(self, i: int):
        return self.elements[i]

    def index_of(self, g) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise KeyError(f"element {self.group.describe(g)} outside ball({self.radius})")

    def inverse_index(self, i: int) -> int:
        return self.inverse_table()[i]

    def inverse_table(self) -> list:
        if self._inverse is None:
            inv = []
            for g in self.elements:
                h = self.group.inverse(g)
                if h not in self.index:
                    raise RuntimeError("ball is not inverse-closed")
                inv.append(self.index[h])
            self._inverse = inv
        return self._inverse

    def product_index(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j], or -1 if outside the ball."""
        h = self.group.multiply(self.elements[i], self.elements[j])
        return self.index.get(h, -1)

    def product_table(self):
        """Dense n*n table of in-ball product indices (-1 = outside)."""
        if self._products is None:
            from array import array

            n = len(self.elements)
            table = array("i", [-1] * (n * n))
            mul = self.group.multiply
            idx = self.index
            for i, g in enumerate(self.elements):
                row = i * n
                for j, h in enumerate(self.elements):
                    table[row + j] = idx.get(mul(g, h), -1)
            self._products = table
        return self._products

    def describe(self, i: int) -> str:
        return self.group.describe(self.elements[i])


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------


def _default_names(count: int, pool: str = "abcdefghijklmnopqrstuvwxyz") -> tuple[str, ...]:
    if count <= len(pool):
        return tuple(pool[:count])
    return tuple(f"g{i}" for i in range(1, count + 1))


class FreeGroup(Group):
    """Free group of finite rank; elements are freely reduced words."""

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        self.names = tuple(names) if names else _default_names(rank)
        if len(self.names) != rank:
            raise ValueError("need one name per generator")
        self.name = f"F{rank}"

    def identity(self) -> Word:
        return ()

    def generator_count(self) -> int:
        return self.rank

    def _generator(self, index: int) -> Word:
        return (index,)

    def multiply(self, a: Word, b: Word) -> Word:
        self.check_element(a)
        self.check_element(b)
        out = list(a)
        for x in b:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def inverse(self, a: Word) -> Word:
        self.check_element(a)
        return tuple(-x for x in reversed(a))

    def check_element(self, a) -> None:
        if not isinstance(a, tuple) or any(
            not isinstance(x, int) or x == 0 or abs(x) > self.rank for x in a
        ):
            raise BackendMismatch(f"{self.name}: not a word: {a!r}")

    def sort_key(self, a: Word):
        return a

    def describe(self, a: Word) -> str:
        if not a:
            return "e"
        parts = []
        for x in a:
            parts.append(self.names[abs(x) - 1] + ("" if x > 0 else "^-1"))
        return "*".join(parts)

    def element_json(self, a: Word):
        return list(a)

    def spec(self) -> dict:
        return {"kind": "free_group", "rank": self.rank}


class FreeAbelian(Group):
    """Z^n with coordinatewise addition."""

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        self.names = tuple(names) if names else _default_names(rank, "xyzwuv")
        self.name = f"Z^{rank}"

    def identity(self) -> Vector:
        return (0,) * self.rank

    def generator_count(self) -> int:
        return self.rank

    def _generator(self, index: int) -> Vector:
        return tuple(1 if i == index - 1 else 0 for i in range(self.rank))

    def multiply(self, a: Vector, b: Vector) -> Vector:
        self.check_element(a)
        self.check_element(b)
        return vec_add(a, b)

    def inverse(self, a: Vector) -> Vector:
        self.check_element(a)
        return vec_neg(a)

    def check_element(self, a) -> None:
        if (
            not isinstance(a, tuple)
            or len(a) != self.rank
            or any(not isinstance(x, int) for x in a)
        ):
            raise BackendMismatch(f"{self.name}: not a coordinate tuple: {a!r}")

    def sort_key(self, a: Vector):
        return a

    def describe(self, a: Vector) -> str:
        return "(" + ", ".join(str(x) for x in a) + ")"

    def element_json(self, a: Vector):
        return list(a)

    def spec(self) -> dict:
        return {"kind": "free_abelian", "rank": self.rank}


class FiniteCyclic(Group):
    """Z/m, elements as residues in [0, m)."""

    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        self.modulus = modulus
        self.name = f"Z/{modulus}"

    def identity(self) -> int:
        return 0

    def generator_count(self) -> int:
        return 1

    def _generator(self, index: int) -> int:
        return 1 % self.modulus

    def multiply(self, a: int, b: int) -> int:
        self.check_element(a)
        self.check_element(b)
        return (a + b) % self.modulus

    def inverse(self, a: int) -> int:
        self.check_element(a)
        return (-a) % self.modulus

    def check_element(self, a) -> None:
        if not isinstance(a, int) or not 0 <= a < self.modulus:
            raise BackendMismatch(f"{self.name}: not a residue: {a!r}")

    def sort_key(self, a: int):
        return a

    def describe(self, a: int) -> str:
        return "e" if a == 0 else f"g^{a}"

    def spec(self) -> dict:
        return {"kind": "finite_cyclic", "modulus": self.modulus}


class KleinBottle(Group):
    """The group <a, b | b a b^-1 = a^-1> in the normal form a^m b^n.

    Multiplication law: (a^m b^n)(a^p b^q) = a^(m + (-1)^n p) b^(n + q).
    This is the standard exactly-solvable nonabelian left-orderable example.
    """

    def __init__(self):
        self.name = "KleinBottle"
        self.names = ("a", "b")

    def identity(self) -> tuple[int, int]:
        return (0, 0)

    def generator_count(self) -> int:
        return 2

    def _generator(self, index: int) -> tuple[int, int]:
        return (1, 0) if index == 1 else (0, 1)

    def multiply(self, a, b):
        self.check_element(a)
        self.check_element(b)
        m, n = a
        p, q = b
        sign = -1 if n % 2 else 1
        return (m + sign * p, n + q)

    def inverse(self, a):
        self.check_element(a)
        m, n = a
        sign = -1 if n % 2 else 1
        return (-sign * m, -n)

    def check_element(self, a) -> None:
        if (
            not isinstance(a, tuple)
            or len(a) != 2
            or any(not isinstance(x, int) for x in a)
        ):
            raise BackendMismatch(f"{self.name}: not an (m, n) pair: {a!r}")

    def sort_key(self, a):
        return a

    def describe(self, a) -> str:
        m, n = a
        if m == 0 and n == 0:
            return "e"
        parts = []
        if m:
            parts.append("a" if m == 1 else f"a^{m}")
        if n:
            parts.append("b" if n == 1 else f"b^{n}")
        return "*".join(parts)

    def element_json(self, a):
        return list(a)

    def spec(self) -> dict:
        return {"kind": "klein_bottle"}


class IntegerMatrixGroup(Group):
    """Group generated by unimodular integer matrices; elements are matrices."""

    def __init__(self, generators: Sequence[Sequence[Sequence[int]]], names=None):
        mats = tuple(as_matrix(m) for m in generators)
        if not mats:
            raise ValueError("need at least one generator matrix")
        dim = len(mats[0])
        for m in mats:
            if len(m) != dim or any(len(row) != dim for row in m):
                raise ValueError("generator matrices must be square, same size")
            if det(m) not in (1, -1):
                raise ValueError(f"generator is not invertible over Z: {m}")
        self.dimension = dim
        self.generator_matrices = mats
        self.names = tuple(names) if names else _default_names(len(mats), "ABCDEFGH")
        self.name = f"Mat{dim}"

    def identity(self) -> Matrix:
        return identity_matrix(self.dimension)

    def generator_count(self) -> int:
        return len(self.generator_matrices)

    def _generator(self, index: int) -> Matrix:
        return self.generator_matrices[index - 1]

    def multiply(self, a: Matrix, b: Matrix) -> Matrix:
        self.check_element(a)
        self.check_element(b)
        return mat_mul(a, b)

    def inverse(self, a: Matrix) -> Matrix:
        self.check_element(a)
        return mat_inverse_unimodular(a)

    def check_element(self, a) -> None:
        if (
            not isinstance(a, tuple)
            or len(a) != self.dimension
            or any(not isinstance(row, tuple) or len(row) != self.dimension for row in a)
        ):
            raise BackendMismatch(f"{self.name}: not a {self.dimension}x{self.dimension} matrix: {a!r}")

    def sort_key(self, a: Matrix):
        return tuple(x for row in a for x in row)

    def describe(self, a: Matrix) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in a) + "]"

    def element_json(self, a: Matrix):
        return [list(row) for row in a]

    def spec(self) -> dict:
        return {
            "kind": "integer_matrix",
            "dimension": self.dimension,
            "generators": [self.element_json(m) for m in self.generator_matrices],
        }


class SemidirectProduct(Group):
    """Matrix group acting on Z^n: elements (M, v), product (M1 M2, v1 + M1 v2).

    Generators are the matrix generators (with zero vector) followed by the
    standard basis of the Z^n fiber (with identity matrix).
    """

    def __init__(self, matrix_generators: Sequence, dimension: int | None = None, names=None):
        mats = tuple(as_matrix(m) for m in matrix_generators)
        if not mats:
            raise ValueError("need at least one matrix generator")
        dim = len(mats[0])
        if dimension is not None and dimension != dim:
            raise ValueError("dimension does not match matrix size")
        self._matrix_group = IntegerMatrixGroup(mats)
        self.dimension = dim
        self.matrix_generators = mats
        base = tuple(names) if names else _default_names(len(mats), "ABCDEFGH")
        self.names = base + tuple(f"t{i}" for i in range(1, dim + 1))
        self.name = f"Mat{dim}xZ^{dim}"

    def matrix_group(self) -> IntegerMatrixGroup:
        return self._matrix_group

    def fiber_group(self) -> FreeAbelian:
        return FreeAbelian(self.dimension)

    def identity(self):
        return (identity_matrix(self.dimension), (0,) * self.dimension)

    def generator_count(self) -> int:
        return len(self.matrix_generators) + self.dimension

    def _generator(self, index: int):
        k = len(self.matrix_generators)
        if index <= k:
            return (self.matrix_generators[index - 1], (0,) * self.dimension)
        coord = index - k - 1
        vec = tuple(1 if i == coord else 0 for i in range(self.dimension))
        return (identity_matrix(self.dimension), vec)

    def multiply(self, a, b):
        self.check_element(a)
        self.check_element(b)
        m1, v1 = a
        m2, v2 = b
        return (mat_mul(m1, m2), vec_add(v1, mat_vec(m1, v2)))

    def inverse(self, a):
        self.check_element(a)
        m, v = a
        minv = mat_inverse_unimodular(m)
        return (minv, vec_neg(mat_vec(minv, v)))

    def check_element(self, a) -> None:
        if not isinstance(a, tuple) or len(a) != 2:
            raise BackendMismatch(f"{self.name}: not a (matrix, vector) pair: {a!r}")
        m, v = a
        if len(v) != self.dimension or len(m) != self.dimension:
            raise BackendMismatch(f"{self.name}: wrong dimensions: {a!r}")

    def sort_key(self, a):
        m, v = a
        return (tuple(x for row in m for x in row), v)

    def describe(self, a) -> str:
        m, v = a
        mpart = "[" + "; ".join(" ".join(str(x) for x in row) for row in m) + "]"
        vpart = "(" + ", ".join(str(x) for x in v) + ")"
        return f"({mpart}, {vpart})"

    def element_json(self, a):
        m, v = a
        return {"matrix": [list(row) for row in m], "vector": list(v)}

    def spec(self) -> dict:
        return {
            "kind": "semidirect",
            "dimension": self.dimension,
            "matrix_generators": [[list(row) for row in m] for m in self.matrix_generators],
        }


class PermutationGroup(Group):
    """Subgroup of Sym(degree) given by generator permutations (image tuples)."""

    def __init__(self, generators: Sequence[Sequence[int]], degree: int, one_based: bool = False):
        self.degree = degree
        gens = []
        for p in generators:
            images = tuple(int(x) - (1 if one_based else 0) for x in p)
            if sorted(images) != list(range(degree)):
                raise ValueError(f"not a permutation of degree {degree}: {p}")
            gens.append(images)
        if not gens:
            raise ValueError("need at least one generator permutation")
        self.generator_perms = tuple(gens)
        self.name = f"Perm{degree}"

    def identity(self):
        return tuple(range(self.degree))

    def generator_count(self) -> int:
        return len(self.generator_perms)

    def _generator(self, index: int):
        return self.generator_perms[index - 1]

    def multiply(self, a, b):
        """Composition a after b: (a*b)(x) = a(b(x))."""
        self.check_element(a)
        self.check_element(b)
        return tuple(a[b[i]] for i in range(self.degree))

    def inverse(self, a):
        self.check_element(a)
        out = [0] * self.degree
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def check_element(self, a) -> None:
        if not isinstance(a, tuple) or len(a) != self.degree:
            raise BackendMismatch(f"{self.name}: not a degree-{self.degree} permutation: {a!r}")

    def sort_key(self, a):
        return a

    def describe(self, a) -> str:
        return "(" + " ".join(str(x + 1) for x in a) + ")"

    def element_json(self, a):
        return [x + 1 for x in a]

    def spec(self) -> dict:
        return {
            "kind": "permutation",
            "degree": self.degree,
            "generators": [self.element_json(p) for p in self.generator_perms],
        }


# ---------------------------------------------------------------------------
# stock constructions
# ---------------------------------------------------------------------------

# Free generating pair of the level-2 congruence subgroup of SL(2, Z)
# (Sanov's theorem): these two matrices generate a free group of rank 2.
SANOV_A: Matrix = ((1, 2), (0, 1))
SANOV_B: Matrix = ((1, 0), (2, 1))


def sanov_matrix_group() -> IntegerMatrixGroup:
    return IntegerMatrixGroup([SANOV_A, SANOV_B], names=("A", "B"))


def sanov_semidirect() -> SemidirectProduct:
    """Free Sanov pair acting on the Z^2 lattice."""
    return SemidirectProduct([SANOV_A, SANOV_B], names=("A", "B"))


def quaternion_permutation_group() -> PermutationGroup:
    """Q8 in its regular representation inside Sym(8).

    Point order: 1, -1, i, -i, j, -j, k, -k; generators are left
    multiplication by i and by j.
    """
    left_i = (2, 3, 1, 0, 6, 7, 5, 4)
    left_j = (4, 5, 7, 6, 1, 0, 2, 3)
    return PermutationGroup([left_i, left_j], degree=8)


def group_from_spec(spec: dict) -> Group:
    """Build a backend from its JSON description (see the CLI config schema)."""
    kind = spec.get("kind")
    if kind == "free_group":
        return FreeGroup(spec["rank"], spec.get("names"))
    if kind == "free_abelian":
        return FreeAbelian(spec["rank"], spec.get("names"))
    if kind == "finite_cyclic":
        return FiniteCyclic(spec["modulus"])
    if kind == "klein_bottle":
        return KleinBottle()
    if kind == "integer_matrix":
        return IntegerMatrixGroup(spec["generators"], spec.get("names"))
    if kind == "semidirect":
        return SemidirectProduct(
            spec["matrix_generators"], spec.get("dimension"), spec.get("names")
        )
    if kind == "permutation":
        return PermutationGroup(
            spec["generators"], spec["degree"], one_based=spec.get("one_based", True)
        )
    if kind == "quaternion_q8":
        return quaternion_permutation_group()
    raise ValueError(f"unknown group kind: {kind!r}")
