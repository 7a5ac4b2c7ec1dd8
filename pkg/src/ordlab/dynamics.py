"""Order dynamics at finite scale.

Three strands:

* Poincare recurrence on finite measure systems (exact rational weights):
  return times and the block-union verification behind the theorem.
* Conradian and recurrence conditions for an order, tested over a ball
  with an explicit power bound; one-sided by nature, so failures are
  certified where possible and successes are "at scale" only.
* The hyperbolic-matrix machinery for the semidirect counterexample:
  exact eigen data, shared-eigenline tests by integer resultant, and
  invariant-orthant non-recurrence certificates that replace a limit
  argument with a finitely checkable induction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .groups import SemidirectProduct
from .intmat import Matrix, Vector, det, mat_vec, vec_dot
from .orders import (
    LESS,
    EQUAL,
    GREATER,
    OrderedChain,
    OracleDomainError,
    OrderOracle,
    as_chain,
)
from .reports import (
    CERTIFIED_FAILURE,
    FAILS_AT_SCALE,
    HOLDS_AT_SCALE,
    InstanceOutcome,
    ScaleReport,
    build_table,
)

DEFAULT_INSTANCE_BUDGET = 10_000


# ---------------------------------------------------------------------------
# finite measure-preserving systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteDynamicalSystem:
    """Finite point set, self-map, exact rational probability weights.

    The map must preserve the measure (preimage sums equal point weights);
    on the positive-weight support this forces a bijection, while weight-0
    points may behave arbitrarily (they are the exceptional null set).
    """

    labels: tuple[str, ...]
    mapping: tuple[int, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.mapping) != n or len(self.weights) != n:
            raise ValueError("labels, mapping, weights must have equal length")
        if any(not 0 <= t < n for t in self.mapping):
            raise ValueError("mapping leaves the point set")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if sum(self.weights, Fraction(0)) != 1:
            raise ValueError("weights must sum to 1")

    @property
    def size(self) -> int:
        return len(self.labels)

    def support(self) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w > 0]

    def is_measure_preserving(self) -> bool:
        pre = [Fraction(0)] * self.size
        for x, w in enumerate(self.weights):
            pre[self.mapping[x]] += w
        return all(pre[x] == self.weights[x] for x in range(self.size))

    def iterate(self, x: int, k: int) -> int:
        for _ in range(k):
            x = self.mapping[x]
        return x

    def compose_power(self, n: int) -> list[int]:
        """The map T^n as an image table."""
        table = list(range(self.size))
        step = list(self.mapping)
        k = n
        while k:
            if k & 1:
                table = [step[t] for t in table]
            step = [step[t] for t in step]
            k >>= 1
        return table

    def cycles(self) -> list[list[int]]:
        """Cycles of the map restricted to its eventually-periodic part."""
        seen = set()
        out = []
        for start in range(self.size):
            if start in seen:
                continue
            path = []
            x = start
            while x not in seen and x not in path:
                path.append(x)
                x = self.mapping[x]
            if x in path:
                cycle = path[path.index(x):]
                out.append(cycle)
            seen.update(path)
        return out

    @classmethod
    def rotation(cls, m: int, offset: int = 1) -> "FiniteDynamicalSystem":
        return cls(
            tuple(str(i) for i in range(m)),
            tuple((i + offset) % m for i in range(m)),
            (Fraction(1, m),) * m,
        )

    @classmethod
    def from_permutation(cls, perm: Sequence[int], weights=None) -> "FiniteDynamicalSystem":
        n = len(perm)
        if weights is None:
            weights = (Fraction(1, n),) * n
        return cls(tuple(str(i) for i in range(n)), tuple(perm), tuple(weights))

    @classmethod
    def random_invariant(cls, rng, max_points: int = 64) -> "FiniteDynamicalSystem":
        """Random permutation with cycle-constant rational weights."""
        n = rng.randint(2, max_points)
        perm = list(range(n))
        rng.shuffle(perm)
        system = cls.from_permutation(perm)
        raw = [0] * n
        for cycle in system.cycles():
            value = rng.randint(0, 4)
            for x in cycle:
                raw[x] = value
        total = sum(raw)
        if total == 0:
            raw = [1] * n
            total = n
        weights = tuple(Fraction(r, total) for r in raw)
        return cls.from_permutation(perm, weights)


NO_RETURN = None


def poincare_return_times(
    system: FiniteDynamicalSystem, subset: Sequence[int]
) -> dict[int, int | None]:
    """Least n >= 1 with T^n(a) back in the subset, for each a in it.

    Every positive-weight point returns (recurrence in the finite exact
    form); weight-0 points may come back None -- they are the null set the
    theorem excludes.
    """
    if not system.is_measure_preserving():
        raise ValueError("weights are not invariant under the map")
    subset = sorted(set(subset))
    if not subset:
        return {}
    member = set(subset)
    bound = 2 * system.size
    out: dict[int, int | None] = {}
    for a in subset:
        x = a
        found = None
        for n in range(1, bound + 1):
            x = system.mapping[x]
            if x in member:
                found = n
                break
        if found is None and system.weights[a] > 0:
            raise RuntimeError("positive-weight point failed to return; invariance broken")
        out[a] = found
    return out


@dataclass
class ReturnBlockReport:
    """Verification data for one power n: membership of the union of
    n-step preimage blocks, and the exact escaping measure (always 0 for
    invariant weights)."""

    n: int
    subset: tuple[int, ...]
    block_union: tuple[int, ...]
    escaping_measure: Fraction
    holds: bool
    disjointness_pair: tuple[int, int] | None = None

    def to_json(self) -> dict:
        from .reports import jsonable

        return {
            "n": self.n,
            "subset": list(self.subset),
            "block_union": list(self.block_union),
            "escaping_measure": jsonable(self.escaping_measure),
            "holds": self.holds,
            "disjointness_pair": list(self.disjointness_pair)
            if self.disjointness_pair
            else None,
        }


def poincare_block_verification(
    system: FiniteDynamicalSystem, subset: Sequence[int], n: int
) -> ReturnBlockReport:
    """Check that almost every point of the subset revisits it along T^n.

    Computes the union over k >= 1 of the k*n-step preimages of the subset
    (it stabilizes within |X| terms on a finite set) and the measure of the
    subset outside that union.  If that measure were positive, the equal-
    measure preimage blocks could not all be disjoint, and the witnessing
    pair of exponents is reported.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not system.is_measure_preserving():
        raise ValueError("weights are not invariant under the map")
    subset = sorted(set(subset))
    member = set(subset)
    size = system.size
    tn = system.compose_power(n)
    # x is in the union iff its forward T^n-orbit hits the subset after >= 1
    # steps, i.e. tn(x) reaches the subset; reverse reachability from the
    # subset along tn-preimages computes this in linear time
    preimages = [[] for _ in range(size)]
    for x, y in enumerate(tn):
        preimages[y].append(x)
    reaches = set(member)
    stack = list(member)
    while stack:
        y = stack.pop()
        for x in preimages[y]:
            if x not in reaches:
                reaches.add(x)
                stack.append(x)
    union = {x for x in range(size) if tn[x] in reaches}
    escaping = sum((system.weights[x] for x in member if x not in union), Fraction(0))
    pair = None
    if escaping > 0:
        pair = _disjointness_pair(system, member - union, tn)
    return ReturnBlockReport(
        n,
        tuple(subset),
        tuple(sorted(union)),
        escaping,
        escaping == 0,
        pair,
    )


def _disjointness_pair(system, escaping_set, tn):
    """Exponents k > l whose preimage blocks of the escaping set meet."""
    preimages = {x: [] for x in range(system.size)}
    for x, y in enumerate(tn):
        preimages[y].append(x)

    def preimage(block):
        out = set()
        for y in block:
            out.update(preimages[y])
        return out

    blocks = []
    block = set(escaping_set)
    bound = 2 * system.size + 2
    for _ in range(bound):
        block = preimage(block)
        blocks.append(block)
    for k in range(len(blocks)):
        for l in range(-1, k):
            earlier = blocks[l] if l >= 0 else set(escaping_set)
            if blocks[k] & earlier:
                return (k + 1, l + 1)
    return None


# ---------------------------------------------------------------------------
# Conradian and recurrence conditions at scale
# ---------------------------------------------------------------------------


def _positive_ball_elements(oracle: OrderOracle, ball) -> list:
    out = []
    for i, g in enumerate(ball.elements):
        if i == ball.identity_index:
            continue
        try:
            if oracle.positive(g):
                out.append(g)
        except OracleDomainError:
            continue
    return out


def conradian_at_scale(oracle: OrderOracle, ball, bound: int) -> ScaleReport:
    """For every positive pair (gamma, lambda) in the ball, search for
    n <= bound with gamma < lambda * gamma^n.

    Per-pair witnesses are recorded; exhausted pairs are only a
    finite-scale failure (the unbounded condition may still hold).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    group = oracle.group
    positives = _positive_ball_elements(oracle, ball)
    outcomes = []
    held = failed = 0
    for gamma in positives:
        gamma_inv = group.inverse(gamma)
        for lam in positives:
            witness = None
            note = ""
            current = group.multiply(gamma_inv, lam)  # gamma^-1 lambda gamma^n, n = 0
            for n in range(1, bound + 1):
                current = group.multiply(current, gamma)
                try:
                    if oracle.positive(current):
                        witness = n
                        break
                except OracleDomainError:
                    note = f"products leave the oracle domain at n={n}"
            ok = witness is not None
            held += ok
            failed += not ok
            outcomes.append(
                InstanceOutcome(
                    {"gamma": group.describe(gamma), "lambda": group.describe(lam)},
                    ok,
                    witness,
                    note,
                )
            )
    table, truncated = build_table(outcomes)
    return ScaleReport(
        kind="conradian",
        status=HOLDS_AT_SCALE if failed == 0 else FAILS_AT_SCALE,
        bound=bound,
        total=len(outcomes),
        held=held,
        failed=failed,
        table=table,
        truncated=truncated,
    )


def recurrence_witnesses(
    oracle: OrderOracle,
    gamma,
    chain,
    bound: int,
    cross_check: bool = True,
) -> list[int]:
    """All n in [1, bound] for which the chain stays increasing after
    right-translating every entry by gamma^n.

    Requires the chain to be increasing to begin with.  With cross_check
    the same answer is recomputed through the translated oracle (moving the
    order by gamma^-n instead of the chain by gamma^n) and compared.
    """
    chain = as_chain(chain)
    group = oracle.group
    if not oracle.in_basic_open(chain):
        raise ValueError("chain is not initially increasing")
    witnesses = []
    shifted = list(chain.elements)
    power = group.identity()
    for n in range(1, bound + 1):
        shifted = [group.multiply(x, gamma) for x in shifted]
        power = group.multiply(power, gamma)
        try:
            ok = all(
                oracle.compare(shifted[i], shifted[i + 1]) == LESS
                for i in range(len(shifted) - 1)
            )
        except OracleDomainError:
            continue
        if cross_check:
            translated = oracle.translate(group.inverse(power))
            try:
                dual = translated.in_basic_open(chain)
            except OracleDomainError:
                dual = ok
            if dual != ok:
                raise RuntimeError(
                    f"translation duality failed at n={n} for gamma={group.describe(gamma)}"
                )
        if ok:
            witnesses.append(n)
    return witnesses


def recurrent_at_scale(
    oracle: OrderOracle,
    ball,
    bound: int,
    max_chain_len: int = 3,
    min_witnesses: int = 3,
    budget: int = DEFAULT_INSTANCE_BUDGET,
    certify: bool = True,
    orbit_bound: int = 64,
) -> ScaleReport:
    """Recurrence of the order under every cyclic subgroup, at finite scale.

    Tests every gamma in the ball (the ball is inverse-closed, so both a
    power direction and its inverse are covered) against increasing chains
    of length <= max_chain_len drawn from the ball, demanding at least
    min_witnesses translation exponents in [1, bound]; a single witness is
    reported but does not count as holding.

    For split extensions with a functional fiber order, a certified
    failure is attempted first: an invariant-orthant certificate proves the
    witness set of one instance empty for every bound.
    """
    group = oracle.group
    certificate = None
    if certify and isinstance(group, SemidirectProduct):
        certificate = _invariant_orthant_shortcut(group, oracle, orbit_bound)
    if certificate is not None:
        return ScaleReport(
            kind="recurrent",
            status=CERTIFIED_FAILURE,
            bound=bound,
            total=1,
            held=0,
            failed=1,
            table=[
                InstanceOutcome(
                    {
                        "gamma": certificate.gamma_description,
                        "chain": certificate.chain_description,
                    },
                    False,
                    [],
                    "witness set empty for every bound (invariant orthant)",
                )
            ],
            certificate=certificate,
            note="certified via an invariant orthant; exhaustive sweep skipped",
        )

    outcomes = []
    held = failed = 0
    budget_exhausted = False
    nontrivial = [
        g for i, g in enumerate(ball.elements) if i != ball.identity_index
    ]
    done = False
    for length in range(2, max_chain_len + 1):
        if done:
            break
        for combo in combinations(range(len(ball)), length):
            if done:
                break
            elems = [ball.element(i) for i in combo]
            try:
                elems.sort(key=_sort_key_by_oracle(oracle, group))
            except OracleDomainError:
                continue
            chain = OrderedChain(tuple(elems))
            for gamma in nontrivial:
                if len(outcomes) >= budget:
                    budget_exhausted = True
                    done = True
                    break
                witnesses = recurrence_witnesses(
                    oracle, gamma, chain, bound, cross_check=False
                )
                ok = len(witnesses) >= min_witnesses
                held += ok
                failed += not ok
                note = ""
                if not ok and witnesses:
                    note = "witnesses found but fewer than required"
                outcomes.append(
                    InstanceOutcome(
                        {
                            "gamma": group.describe(gamma),
                            "chain": [group.describe(x) for x in chain.elements],
                        },
                        ok,
                        witnesses,
                        note,
                    )
                )
    table, truncated = build_table(outcomes)
    return ScaleReport(
        kind="recurrent",
        status=HOLDS_AT_SCALE if failed == 0 else FAILS_AT_SCALE,
        bound=bound,
        total=len(outcomes),
        held=held,
        failed=failed,
        table=table,
        truncated=truncated,
        budget_exhausted=budget_exhausted,
    )


def _sort_key_by_oracle(oracle: OrderOracle, group):
    import functools

    def cmp(a, b):
        return oracle.compare(a, b)

    return functools.cmp_to_key(cmp)


@dataclass
class ImplicationOutcome:
    gamma: str
    lam: str
    witnesses: list[int]
    verified: list[int]
    violations: list[int]

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma,
            "lambda": self.lam,
            "witnesses": self.witnesses,
            "verified": self.verified,
            "violations": self.violations,
        }


@dataclass
class ImplicationReport:
    """Recurrence-to-Conradian implication, instance by instance.

    For positive gamma, lambda: a recurrence witness n for the chain
    (e, lambda) gives lambda gamma^n > gamma^n, and gamma^n >= gamma for
    positive gamma, so transitivity forces lambda gamma^n > gamma.  Any
    violating instance would contradict a theorem, so the expected count
    is zero; pairs with no witnesses are skipped, matching the hypothesis.
    """

    bound: int
    total_pairs: int
    checked_pairs: int
    skipped_pairs: int
    violations: list[ImplicationOutcome]
    budget_exhausted: bool = False

    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "total_pairs": self.total_pairs,
            "checked_pairs": self.checked_pairs,
            "skipped_pairs": self.skipped_pairs,
            "violations": [v.to_json() for v in self.violations],
            "budget_exhausted": self.budget_exhausted,
        }


def recurrent_implies_conradian_check(
    oracle: OrderOracle,
    ball,
    bound: int,
    budget: int = DEFAULT_INSTANCE_BUDGET,
) -> ImplicationReport:
    group = oracle.group
    e = group.identity()
    positives = _positive_ball_elements(oracle, ball)
    total = checked = skipped = 0
    violations = []
    budget_exhausted = False
    for gamma in positives:
        for lam in positives:
            total += 1
            if checked + skipped >= budget:
                budget_exhausted = True
                break
            try:
                witnesses = recurrence_witnesses(
                    oracle, gamma, OrderedChain((e, lam)), bound, cross_check=False
                )
            except OracleDomainError:
                skipped += 1
                continue
            if not witnesses:
                skipped += 1
                continue
            checked += 1
            verified = []
            bad = []
            for n in witnesses:
                power = group.power(gamma, n)
                if oracle.compare(gamma, power) == GREATER:
                    continue  # gamma^n >= gamma is the transitivity hypothesis
                target = group.multiply(lam, power)
                if oracle.compare(gamma, target) == LESS:
                    verified.append(n)
                else:
                    bad.append(n)
            if bad:
                violations.append(
                    ImplicationOutcome(
                        group.describe(gamma),
                        group.describe(lam),
                        witnesses,
                        verified,
                        bad,
                    )
                )
        if budget_exhausted:
            break
    return ImplicationReport(bound, total, checked, skipped, violations, budget_exhausted)


# ---------------------------------------------------------------------------
# hyperbolic matrices: exact eigen data and shared eigenlines
# ---------------------------------------------------------------------------


def is_hyperbolic(m: Matrix) -> bool:
    """Determinant-one 2x2 integer matrix with |trace| > 2."""
    if len(m) != 2 or any(len(row) != 2 for row in m):
        raise ValueError("expected a 2x2 matrix")
    if det(m) != 1:
        raise ValueError(f"determinant must be 1, got {det(m)}")
    trace = m[0][0] + m[1][1]
    return abs(trace) > 2


@dataclass(frozen=True)
class EigenData:
    """Exact spectral data: eigenvalues (trace +- sqrt(disc))/2 and the
    integer quadratic c t^2 + (d - a) t - b = 0 cut out by the eigenline
    slopes t = x/y."""

    trace: int
    discriminant: int
    slope_quadratic: tuple[int, int, int]

    def eigenvalues_description(self) -> str:
        return f"({self.trace} +- sqrt({self.discriminant}))/2"

    def to_json(self) -> dict:
        return {
            "trace": self.trace,
            "discriminant": self.discriminant,
            "slope_quadratic": list(self.slope_quadratic),
        }


def eigen_data(m: Matrix) -> EigenData:
    if det(m) != 1:
        raise ValueError(f"determinant must be 1, got {det(m)}")
    a, b = m[0]
    c, d = m[1]
    trace = a + d
    return EigenData(trace, trace * trace - 4, (c, d - a, -b))


def resultant_of_quadratics(p: tuple[int, int, int], q: tuple[int, int, int]) -> int:
    """Resultant of two quadratics; zero exactly when they share a root."""
    a, b, c = p
    d, e, f = q
    if a == 0 or d == 0:
        raise ValueError("leading coefficients must be nonzero")
    return (a * f - c * d) ** 2 - (a * e - b * d) * (b * f - c * e)


def common_eigenline(m1: Matrix, m2: Matrix) -> bool:
    """Whether two hyperbolic matrices share an eigenline (exact)."""
    for m in (m1, m2):
        if not is_hyperbolic(m):
            raise ValueError(f"matrix is not hyperbolic: {m}")
    q1 = eigen_data(m1).slope_quadratic
    q2 = eigen_data(m2).slope_quadratic
    if q1[0] == 0 or q2[0] == 0:
        # det 1 and c = 0 forces trace +-2, which is not hyperbolic
        raise ValueError("degenerate eigenline quadratic for a hyperbolic matrix")
    return resultant_of_quadratics(q1, q2) == 0


# ---------------------------------------------------------------------------
# invariant-orthant non-recurrence certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonRecurrenceCertificate:
    """Finite data proving one recurrence instance has no witnesses at all.

    The acting matrix has nonnegative entries, so the strictly signed
    orthant is forward-invariant; the orbit of the start vector enters it
    at step `threshold` and the fiber functional is negative there, so
    every later conjugate is negative.  The finitely many earlier steps
    are checked directly -- no limits, only integer arithmetic.
    """

    group_spec: dict
    order_descriptor: dict
    gamma_word: tuple[int, ...]
    gamma_description: str
    chain_description: list
    matrix: Matrix
    functional: tuple[int, ...]
    start_vector: Vector
    threshold: int
    orthant: tuple[int, ...]
    orbit_prefix: tuple[Vector, ...]

    def to_json(self) -> dict:
        return {
            "group": self.group_spec,
            "order": self.order_descriptor,
            "gamma_word": list(self.gamma_word),
            "gamma": self.gamma_description,
            "chain": self.chain_description,
            "matrix": [list(r) for r in self.matrix],
            "functional": list(self.functional),
            "start_vector": list(self.start_vector),
            "threshold": self.threshold,
            "orthant": list(self.orthant),
            "orbit_prefix": [list(v) for v in self.orbit_prefix],
        }


def _functional_fiber(oracle: OrderOracle):
    descr = oracle.descriptor
    if descr.get("kind") != "lex_semidirect":
        return None
    fiber = descr.get("fiber", {})
    if fiber.get("kind") != "functional_lex_zn":
        return None
    return tuple(fiber["functional"])


def non_recurrence_certificate(
    group: SemidirectProduct,
    oracle: OrderOracle,
    t_word: Sequence[int],
    search_box: int = 5,
    orbit_bound: int = 64,
) -> NonRecurrenceCertificate | None:
    """Search a box of fiber vectors for an invariant-orthant certificate.

    Needs the fiber order to be a known integer functional with lex
    tie-break, and the acting matrix hyperbolic with positive trace and
    nonnegative entries (so an orthant is invariant and the spectral limit
    argument can be replaced by orthant membership).  Returns None when the
    box holds no starting vector -- the sign that the functional's kernel
    may be an eigenline of the matrix.
    """
    f = _functional_fiber(oracle)
    if f is None:
        raise ValueError("fiber order is not a functional-lex order; no certificate route")
    matrix_group = group.matrix_group()
    t_matrix = matrix_group.evaluate_word(list(t_word))
    if not is_hyperbolic(t_matrix):
        raise ValueError(f"matrix is not hyperbolic: {t_matrix}")
    if t_matrix[0][0] + t_matrix[1][1] <= 2:
        raise ValueError("need positive trace (positive eigenvalues)")
    if any(x < 0 for row in t_matrix for x in row):
        raise ValueError("matrix has negative entries; no coordinate orthant is invariant")

    dim = group.dimension
    # the strictly negative orthant is invariant and f < 0 there iff f >= 0
    if all(x >= 0 for x in f):
        orthant = (-1,) * dim
    elif all(x <= 0 for x in f):
        orthant = (1,) * dim
    else:
        raise ValueError("functional has mixed signs; no invariant orthant is negative for it")

    from .orders import from_descriptor

    fiber_oracle = from_descriptor(group.fiber_group(), oracle.descriptor["fiber"])

    candidates = sorted(
        (
            (x, y)
            for x in range(-search_box, search_box + 1)
            for y in range(-search_box, search_box + 1)
        ),
        key=lambda v: (max(abs(v[0]), abs(v[1])), v),
    )
    for v in candidates:
        if vec_dot(f, v) <= 0:
            continue
        w = v
        prefix = []
        found = None
        for k in range(1, orbit_bound + 1):
            w = mat_vec(t_matrix, w)
            prefix.append(w)
            if fiber_oracle.positive(w):
                break  # a recurrence witness exists; not a certificate seed
            if all(x * orthant[i] > 0 for i, x in enumerate(w)):
                found = k
                break
        if found is None:
            continue
        sd_word = tuple(t_word)
        gamma_word = tuple(-x for x in reversed(sd_word))  # word for T-bar^-1
        gamma = group.evaluate_word(gamma_word)
        v_bar = (group.identity()[0], tuple(v))
        return NonRecurrenceCertificate(
            group_spec=group.spec(),
            order_descriptor=oracle.descriptor,
            gamma_word=gamma_word,
            gamma_description=group.describe(gamma),
            chain_description=["e", group.describe(v_bar)],
            matrix=t_matrix,
            functional=f,
            start_vector=tuple(v),
            threshold=found,
            orthant=orthant,
            orbit_prefix=tuple(prefix[:found]),
        )
    return None


def _invariant_orthant_shortcut(group, oracle, orbit_bound):
    """Try small hyperbolic words in the matrix generators for a certificate."""
    if _functional_fiber(oracle) is None:
        return None
    k = len(group.matrix_generators)
    words = []
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            if a != b:
                words.append((a, b))
    for word in words:
        try:
            cert = non_recurrence_certificate(group, oracle, word, orbit_bound=orbit_bound)
        except ValueError:
            continue
        if cert is not None:
            return cert
    return None


# ---------------------------------------------------------------------------
# extracting an approximate functional from a fiber order
# ---------------------------------------------------------------------------


@dataclass
class FunctionalFit:
    """An integer direction whose half-plane matches sampled positivity.

    Agreement is exact off the direction's kernel line; the sampled kernel
    points where the order still takes sides are listed as exceptions.
    """

    direction: tuple[int, int]
    sample_radius: int
    samples: int
    exceptional_points: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "direction": list(self.direction),
            "sample_radius": self.sample_radius,
            "samples": self.samples,
            "exceptional_points": [list(p) for p in self.exceptional_points],
        }


def _cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _primitive(v):
    from math import gcd

    g = gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g) if g else v


def functional_sign_extraction(oracle: OrderOracle, sample_radius: int = 8) -> FunctionalFit:
    """Fit an integer functional to a rank-2 lattice order by sampling.

    Samples all lattice points of sup-norm <= sample_radius, finds the
    angular extremes of the positive cone, and tests the perpendicular
    candidates; the smallest valid one wins.  Raises when no half-plane
    fits (the order is not of functional type at this radius).
    """
    group = oracle.group
    if getattr(group, "rank", None) != 2:
        raise ValueError("functional extraction needs a rank-2 lattice order")
    if sample_radius < 8:
        raise ValueError("sample_radius must be >= 8")
    points = [
        (x, y)
        for x in range(-sample_radius, sample_radius + 1)
        for y in range(-sample_radius, sample_radius + 1)
        if (x, y) != (0, 0)
    ]
    positives = [p for p in points if oracle.positive(p)]
    if not positives:
        raise ValueError("no positive samples; not a lattice order")

    cw = ccw = positives[0]
    for v in positives:
        if _cross(cw, v) < 0:
            cw = v
        if _cross(ccw, v) > 0:
            ccw = v
    for v in positives:
        if _cross(cw, v) < 0 or _cross(v, ccw) < 0:
            raise ValueError("positive cone spans more than a half-plane; no functional fits")

    raw_candidates = [
        (-cw[1], cw[0]),
        (ccw[1], -ccw[0]),
        (-cw[1] + ccw[1], cw[0] - ccw[0]),
    ]
    valid = []
    for cand in raw_candidates:
        if cand == (0, 0):
            continue
        cand = _primitive(cand)
        exceptions = []
        ok = True
        for p in positives:
            s = cand[0] * p[0] + cand[1] * p[1]
            if s < 0:
                ok = False
                break
            if s == 0:
                exceptions.append(p)
        if ok:
            valid.append((max(abs(cand[0]), abs(cand[1])), cand, exceptions))
    if not valid:
        raise ValueError("no separating half-plane at this radius")
    valid.sort(key=lambda t: (t[0], t[1]))
    _, direction, exceptions = valid[0]
    exceptions = tuple(sorted(set(exceptions) | {(-p[0], -p[1]) for p in exceptions}))
    return FunctionalFit(direction, sample_radius, len(points), exceptions)
