"""Left-invariant orders as positive cones.

An order is stored as its positive cone: a pure predicate ``positive(g)``
on non-identity canonical forms.  Left invariance then costs nothing
(a < b iff positive(a^-1 b)) and the right-translation action becomes
conjugation of the cone.

Two finite-scale companions:

* ``OrderedChain``   -- a tuple of distinct elements, the data of a basic
                        open set of the order space;
* ``PartialCone``    -- a +/-/unknown sign assignment on a Cayley ball,
                        the radius-r shadow of an order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .groups import (
    Ball,
    FreeAbelian,
    FreeGroup,
    Group,
    IntegerMatrixGroup,
    KleinBottle,
    NotInSubgroup,
    SANOV_A,
    SANOV_B,
    SemidirectProduct,
    Word,
)
from .intmat import Matrix, det, vec_dot

LESS, EQUAL, GREATER = -1, 0, 1
COMPARISON_NAMES = {LESS: "less", EQUAL: "equal", GREATER: "greater"}


class OracleDomainError(ValueError):
    """Partial oracle queried outside the region where it is defined."""


class OracleDefect(ValueError):
    """An alleged order violated trichotomy or the subsemigroup axiom."""


class TruncationError(ValueError):
    """Magnus truncation policy too small for the queried word."""


class ChainError(ValueError):
    """Malformed ordered chain."""


@dataclass(frozen=True)
class OrderedChain:
    """Distinct elements lambda_1, ..., lambda_r with r >= 2."""

    elements: tuple

    def __post_init__(self):
        if len(self.elements) < 2:
            raise ChainError("chain needs at least two elements")
        if len(set(self.elements)) != len(self.elements):
            raise ChainError("chain elements must be distinct")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def translated(self, group: Group, gamma) -> "OrderedChain":
        return OrderedChain(tuple(group.multiply(x, gamma) for x in self.elements))


def as_chain(chain) -> OrderedChain:
    if isinstance(chain, OrderedChain):
        return chain
    return OrderedChain(tuple(chain))


@dataclass(frozen=True, eq=False)
class OrderOracle:
    """A total left order given by its positivity predicate."""

    group: Group
    predicate: Callable[[Any], bool]
    descriptor: dict

    def positive(self, g) -> bool:
        if g == self.group.identity():
            return False
        return self.predicate(g)

    def compare(self, a, b) -> int:
        if a == b:
            return EQUAL
        return LESS if self.positive(self.group.multiply(self.group.inverse(a), b)) else GREATER

    def translate(self, gamma) -> "OrderOracle":
        """The order moved by right translation; on cones this is conjugation."""
        group = self.group
        group.check_element(gamma)
        base = self.predicate
        gamma_inv = group.inverse(gamma)

        def positive(g):
            return base(group.multiply(group.multiply(gamma, g), gamma_inv))

        return OrderOracle(
            group,
            positive,
            {"kind": "translated", "by": group.element_json(gamma), "base": self.descriptor},
        )

    def reverse(self) -> "OrderOracle":
        base = self.predicate
        return OrderOracle(
            self.group,
            lambda g: not base(g),
            {"kind": "reversed", "base": self.descriptor},
        )

    def in_basic_open(self, chain) -> bool:
        chain = as_chain(chain)
        elems = chain.elements
        return all(
            self.compare(elems[i], elems[i + 1]) == LESS for i in range(len(elems) - 1)
        )

    def restrict_to_ball(self, ball: Ball) -> "PartialCone":
        return restrict_to_ball(self, ball)


@dataclass
class PartialCone:
    """Sign assignment on a ball: +1 positive, -1 negative, 0 unknown.

    The identity slot (index 0) is always 0; it is not part of the domain.
    """

    ball: Ball
    signs: list

    @classmethod
    def empty(cls, ball: Ball) -> "PartialCone":
        return cls(ball, [0] * len(ball))

    def copy(self) -> "PartialCone":
        return PartialCone(self.ball, list(self.signs))

    def sign_index(self, i: int) -> int:
        return self.signs[i]

    def sign_of(self, g) -> int:
        return self.signs[self.ball.index_of(g)]

    def set_sign(self, g, sign: int) -> None:
        i = self.ball.index_of(g)
        if i == self.ball.identity_index:
            raise ValueError("identity carries no sign")
        self.signs[i] = sign

    def is_complete(self) -> bool:
        e = self.ball.identity_index
        return all(s != 0 for i, s in enumerate(self.signs) if i != e)

    def known_count(self) -> int:
        return sum(1 for s in self.signs if s != 0)

    def signature(self) -> tuple:
        return tuple(self.signs)

    def positive_elements(self) -> list:
        return [g for g, s in zip(self.ball.elements, self.signs) if s == 1]


def restrict_to_ball(oracle: OrderOracle, ball: Ball) -> PartialCone:
    """Evaluate the oracle on a ball; raises OracleDefect on axiom violations."""
    signs = [0] * len(ball)
    e = ball.identity_index
    inv = ball.inverse_table()
    for i, g in enumerate(ball.elements):
        if i == e:
            continue
        signs[i] = 1 if oracle.positive(g) else -1
    for i in range(len(ball)):
        if i == e:
            continue
        if signs[i] == signs[inv[i]]:
            raise OracleDefect(
                f"trichotomy fails on {ball.describe(i)} / its inverse"
            )
    n = len(ball)
    for i in range(n):
        if i == e:
            continue
        for j in range(n):
            if j == e or signs[j] != signs[i]:
                continue
            p = ball.product_index(i, j)
            if p >= 0 and p != e and signs[p] != signs[i]:
                raise OracleDefect(
                    f"subsemigroup axiom fails on {ball.describe(i)} * {ball.describe(j)}"
                )
    return PartialCone(ball, signs)


def cone_oracle_from_partial(cone: PartialCone) -> OrderOracle:
    """Order oracle defined only on the cone's ball (raises outside)."""
    ball = cone.ball
    signs = list(cone.signs)

    def positive(g):
        try:
            i = ball.index[g]
        except KeyError:
            raise OracleDomainError(
                f"{ball.group.describe(g)} is outside ball({ball.radius})"
            )
        s = signs[i]
        if s == 0:
            raise OracleDomainError(f"sign of {ball.group.describe(g)} is unknown")
        return s == 1

    return OrderOracle(
        ball.group,
        positive,
        {"kind": "partial_cone", "radius": ball.radius, "signs": signs},
    )


def translate_partial_cone(cone: PartialCone, gamma) -> PartialCone:
    """Conjugated cone; unknown wherever the conjugate leaves the ball."""
    ball = cone.ball
    group = ball.group
    gamma_inv = group.inverse(gamma)
    signs = [0] * len(ball)
    for i, g in enumerate(ball.elements):
        if i == ball.identity_index:
            continue
        h = group.multiply(group.multiply(gamma, g), gamma_inv)
        j = ball.index.get(h)
        if j is not None:
            signs[i] = cone.signs[j]
    return PartialCone(ball, signs)


# ---------------------------------------------------------------------------
# library orders: lattice orders
# ---------------------------------------------------------------------------


def lex_zn(group: FreeAbelian, priority: Sequence[int] | None = None, flips: Sequence[int] | None = None) -> OrderOracle:
    """Lexicographic order on Z^n.

    ``priority`` lists coordinates from most to least significant (default
    0, 1, ...); ``flips`` gives a +-1 sign per coordinate.
    """
    n = group.rank
    prio = tuple(priority) if priority is not None else tuple(range(n))
    if sorted(prio) != list(range(n)):
        raise ValueError("priority must be a permutation of the coordinates")
    fl = tuple(flips) if flips is not None else (1,) * n
    if len(fl) != n or any(f not in (1, -1) for f in fl):
        raise ValueError("flips must be +-1 per coordinate")

    def positive(v):
        for c in prio:
            x = v[c] * fl[c]
            if x:
                return x > 0
        return False

    return OrderOracle(
        group,
        positive,
        {"kind": "lex_zn", "priority": list(prio), "flips": list(fl)},
    )


def functional_lex_zn(
    group: FreeAbelian,
    functional: Sequence[int],
    tie_priority: Sequence[int] | None = None,
    tie_flips: Sequence[int] | None = None,
) -> OrderOracle:
    """Order by an integer linear functional, lexicographic on its kernel.

    positive(v) iff f.v > 0, or f.v = 0 and v is lex-positive under the
    tie-break.  Integer functionals keep every comparison exact; an
    irrational slope is approximated by a functional with large entries.
    """
    f = tuple(int(x) for x in functional)
    if len(f) != group.rank:
        raise ValueError("functional has wrong arity")
    if not any(f):
        raise ValueError("zero functional")
    tie = lex_zn(group, tie_priority, tie_flips)

    def positive(v):
        s = vec_dot(f, v)
        if s:
            return s > 0
        return tie.predicate(v)

    return OrderOracle(
        group,
        positive,
        {
            "kind": "functional_lex_zn",
            "functional": list(f),
            "tie_priority": tie.descriptor["priority"],
            "tie_flips": tie.descriptor["flips"],
        },
    )


# ---------------------------------------------------------------------------
# Magnus order on free groups
# ---------------------------------------------------------------------------


def _series_times_letter(series: dict, gen: int, sign: int, cap: int) -> dict:
    """Multiply a truncated power series by the expansion of one letter.

    A generator maps to 1 + X, its inverse to 1 - X + X^2 - ... (geometric
    series), truncated at total degree ``cap``.
    """
    out: dict = {}
    for mono, coeff in series.items():
        room = cap - len(mono)
        if sign > 0:
            out[mono] = out.get(mono, 0) + coeff
            if room >= 1:
                key = mono + (gen,)
                out[key] = out.get(key, 0) + coeff
        else:
            c = coeff
            key = mono
            out[key] = out.get(key, 0) + c
            for _ in range(room):
                c = -c
                key = key + (gen,)
                out[key] = out.get(key, 0) + c
    return {m: c for m, c in out.items() if c}


def magnus_leading_term(word: Word, cap: int) -> tuple[int, tuple, int] | None:
    """First nonzero coefficient of the Magnus expansion minus 1.

    Searches degree by degree and returns (degree, monomial, coefficient)
    for the graded-lexicographically least nonzero monomial, or None if all
    degrees up to ``cap`` vanish (the identity).  Degree 1 coefficients are
    the generator exponent sums, so the common case is O(length).
    """
    if not word:
        return None
    sums: dict = {}
    for x in word:
        g = abs(x)
        sums[g] = sums.get(g, 0) + (1 if x > 0 else -1)
    nonzero = sorted(g for g, c in sums.items() if c)
    if nonzero:
        g = nonzero[0]
        return (1, (g,), sums[g])
    for d in range(2, cap + 1):
        series = {(): 1}
        for x in word:
            series = _series_times_letter(series, abs(x), 1 if x > 0 else -1, d)
        at_degree = {m: c for m, c in series.items() if len(m) == d}
        if at_degree:
            mono = min(at_degree)
            return (d, mono, at_degree[mono])
    return None


def magnus_free(group: FreeGroup, max_degree: int | None = None) -> OrderOracle:
    """The Magnus order on a free group.

    Positivity of a reduced word of length L is decided from the truncated
    Magnus expansion at degree L: the first nonzero coefficient under the
    graded-lexicographic monomial order gives the sign.  A nontrivial
    reduced word of length L always has a nonzero coefficient in degree
    <= L, so truncating at the queried word's length never guesses.  An
    explicit ``max_degree`` below a query's length raises instead.
    """
    cache: dict = {}

    def positive(w):
        if w in cache:
            return cache[w]
        if max_degree is not None and len(w) > max_degree:
            raise TruncationError(
                f"word of length {len(w)} exceeds truncation degree {max_degree}"
            )
        lead = magnus_leading_term(w, len(w))
        if lead is None:
            raise OracleDefect(f"no leading Magnus term for nontrivial word {w!r}")
        result = lead[2] > 0
        cache[w] = result
        return result

    return OrderOracle(
        group,
        positive,
        {"kind": "magnus_free", "max_degree": max_degree},
    )


# ---------------------------------------------------------------------------
# the Sanov free matrix group: matrix -> reduced word, and its Magnus order
# ---------------------------------------------------------------------------


def _nearest_quotient(x: int, y: int) -> int:
    """Integer q minimizing |x - q*y| (y != 0); callers guarantee no ties."""
    q = x // y
    if abs(x - q * y) <= abs(x - (q + 1) * y):
        return q
    return q + 1


def sanov_word(m: Matrix) -> Word:
    """Rewrite a matrix in <[[1,2],[0,1]], [[1,0],[2,1]]> as a reduced word.

    Continued-fraction peeling on the first column: the entries satisfy
    a odd, c even, so exactly one of |a| > |c| or |a| < |c| holds and the
    leading letter (a power of A or of B) is forced.  Letters are +-1 for
    A and +-2 for B.  Raises NotInSubgroup for matrices outside the free
    subgroup (e.g. anything with determinant != 1 or != I mod 2).
    """
    if det(m) != 1:
        raise NotInSubgroup(f"determinant is not 1: {m}")
    a, b = m[0]
    c, d = m[1]
    if a % 2 == 0 or d % 2 == 0 or b % 2 or c % 2:
        raise NotInSubgroup(f"matrix is not congruent to I mod 2: {m}")
    word: list[int] = []
    while True:
        if c == 0:
            if a == 1 and d == 1:
                k = b // 2
                word.extend([1 if k > 0 else -1] * abs(k))
                return tuple(word)
            raise NotInSubgroup("reduction ended at -I; matrix is not in the free pair")
        if abs(a) > abs(c):
            q = _nearest_quotient(a, 2 * c)
            word.extend([1 if q > 0 else -1] * abs(q))
            a, b = a - 2 * q * c, b - 2 * q * d
        else:
            q = _nearest_quotient(c, 2 * a)
            word.extend([2 if q > 0 else -2] * abs(q))
            c, d = c - 2 * q * a, d - 2 * q * b


def sanov_magnus(group: IntegerMatrixGroup, max_degree: int | None = None) -> OrderOracle:
    """Magnus order on the free Sanov matrix group, evaluated on matrices."""
    if group.generator_matrices != (SANOV_A, SANOV_B):
        raise ValueError(
            "the matrix Magnus order is only available for the standard Sanov pair"
        )
    free = FreeGroup(2, names=group.names)
    word_oracle = magnus_free(free, max_degree)
    cache: dict = {}

    def positive(m):
        if m in cache:
            return cache[m]
        result = word_oracle.predicate(sanov_word(m))
        cache[m] = result
        return result

    return OrderOracle(group, positive, {"kind": "magnus_free", "max_degree": max_degree})


# ---------------------------------------------------------------------------
# lexicographic extensions along a semidirect splitting
# ---------------------------------------------------------------------------


def lex_semidirect(group: Group, quotient: OrderOracle, fiber: OrderOracle) -> OrderOracle:
    """Order a split extension by quotient part first, fiber part on ties.

    The fiber subgroup is convex for the resulting order: an element is
    positive iff its quotient image is positive, or the image is trivial
    and its fiber part is positive.
    """
    descriptor = {
        "kind": "lex_semidirect",
        "quotient": quotient.descriptor,
        "fiber": fiber.descriptor,
    }
    if isinstance(group, SemidirectProduct):
        ident = group.identity()[0]

        def positive(g):
            m, v = g
            if m != ident:
                return quotient.predicate(m)
            if any(v):
                return fiber.predicate(v)
            return False

        return OrderOracle(group, positive, descriptor)
    if isinstance(group, KleinBottle):
        # quotient = b-exponent, fiber = a-exponent, both rank-1 lattices
        def positive(g):
            m, n = g
            if n:
                return quotient.predicate((n,))
            if m:
                return fiber.predicate((m,))
            return False

        return OrderOracle(group, positive, descriptor)
    raise ValueError(f"no lexicographic splitting for backend {group.name}")


def klein_bottle_order(group: KleinBottle, b_sign: int = 1, a_sign: int = 1) -> OrderOracle:
    """The four total left orders of the Klein bottle group.

    b_sign picks which b-halfline is positive (dominant coordinate),
    a_sign orders the a-axis on ties.
    """
    z1 = FreeAbelian(1)
    return lex_semidirect(
        group,
        lex_zn(z1, flips=[b_sign]),
        lex_zn(z1, flips=[a_sign]),
    )


def standard_sanov_order(group: SemidirectProduct, functional: Sequence[int] = (1, 0)) -> OrderOracle:
    """Magnus on the free matrix part, functional-lex on the Z^2 fiber."""
    return lex_semidirect(
        group,
        sanov_magnus(group.matrix_group()),
        functional_lex_zn(group.fiber_group(), functional),
    )


# ---------------------------------------------------------------------------
# descriptor loading (CLI configs) and sampling validation
# ---------------------------------------------------------------------------


def from_descriptor(group: Group, descriptor: dict) -> OrderOracle:
    kind = descriptor.get("kind")
    if kind == "lex_zn":
        if not isinstance(group, FreeAbelian):
            raise ValueError("lex_zn needs a free abelian backend")
        return lex_zn(group, descriptor.get("priority"), descriptor.get("flips"))
    if kind == "functional_lex_zn":
        if not isinstance(group, FreeAbelian):
            raise ValueError("functional_lex_zn needs a free abelian backend")
        return functional_lex_zn(
            group,
            descriptor["functional"],
            descriptor.get("tie_priority"),
            descriptor.get("tie_flips"),
        )
    if kind == "magnus_free":
        if isinstance(group, FreeGroup):
            return magnus_free(group, descriptor.get("max_degree"))
        if isinstance(group, IntegerMatrixGroup):
            return sanov_magnus(group, descriptor.get("max_degree"))
        raise ValueError("magnus_free needs a free group or the Sanov matrix pair")
    if kind == "lex_semidirect":
        if isinstance(group, SemidirectProduct):
            quotient = from_descriptor(group.matrix_group(), descriptor["quotient"])
            fiber = from_descriptor(group.fiber_group(), descriptor["fiber"])
        elif isinstance(group, KleinBottle):
            z1 = FreeAbelian(1)
            quotient = from_descriptor(z1, descriptor["quotient"])
            fiber = from_descriptor(z1, descriptor["fiber"])
        else:
            raise ValueError("lex_semidirect needs a semidirect or Klein bottle backend")
        return lex_semidirect(group, quotient, fiber)
    if kind == "partial_cone":
        ball = group.ball(descriptor["radius"])
        signs = list(descriptor["signs"])
        if len(signs) != len(ball):
            raise ValueError(
                f"sign vector length {len(signs)} does not match ball size {len(ball)}"
            )
        return cone_oracle_from_partial(PartialCone(ball, signs))
    if kind == "reversed":
        return from_descriptor(group, descriptor["base"]).reverse()
    raise ValueError(f"unknown order kind: {kind!r}")


def validate_oracle(oracle: OrderOracle, rng, samples: int = 200, max_length: int = 6) -> None:
    """Sampled trichotomy and subsemigroup checks; raises OracleDefect."""
    group = oracle.group
    e = group.identity()
    pool = [group.random_element(rng, max_length) for _ in range(samples)]
    for g in pool:
        if g == e:
            continue
        p, q = oracle.positive(g), oracle.positive(group.inverse(g))
        if p == q:
            raise OracleDefect(f"trichotomy fails at {group.describe(g)}")
    for _ in range(samples):
        g = rng.choice(pool)
        h = rng.choice(pool)
        if g == e or h == e:
            continue
        gh = group.multiply(g, h)
        if gh == e:
            continue
        if oracle.positive(g) and oracle.positive(h) and not oracle.positive(gh):
            raise OracleDefect(
                f"subsemigroup axiom fails at {group.describe(g)} * {group.describe(h)}"
            )
