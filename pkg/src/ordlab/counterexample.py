"""End-to-end separation exhibit on the lattice extension of the Sanov pair.

The pipeline builds the free Sanov matrix group acting on Z^2, orders the
extension lexicographically (Magnus order on the matrix part, x-dominant
functional order on the fiber), and then shows that this group carries a
Conradian-at-scale order which is certifiably not recurrent for every
cyclic subgroup:

1. conradian check over a ball with exponent bound 2 holds on every pair;
2. recurrence fails with an invariant-orthant certificate (empty witness
   set for the standard chain, any bound);
3. two conjugate hyperbolic matrices have no common eigenline (integer
   resultant), so no single functional kernel can absorb the action;
4. the visible pieces (free rank-2 group, Z^2) both surject onto Z;
5. the certificate replays in the independent checker.

Every stage is integer-exact and aborts the report with its stage tag on
failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .certcheck import check_non_recurrence_certificate
from .dynamics import (
    common_eigenline,
    conradian_at_scale,
    eigen_data,
    is_hyperbolic,
    non_recurrence_certificate,
    recurrent_at_scale,
)
from .groups import sanov_semidirect
from .indicability import Presentation, has_infinite_cyclic_quotient, z_quotient_witness
from .intmat import mat_inverse_unimodular, mat_mul
from .orders import standard_sanov_order
from .reports import CERTIFIED_FAILURE, HOLDS_AT_SCALE, jsonable


class StageFailure(RuntimeError):
    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


@dataclass
class DemoReport:
    stages: list = field(default_factory=list)
    ok: bool = True

    def add(self, name: str, verdict: str, data) -> None:
        self.stages.append({"stage": name, "verdict": verdict, "data": jsonable(data)})

    def to_json(self) -> dict:
        return {"ok": self.ok, "stages": self.stages}


def demo_counterexample(
    ball_radius: int = 2,
    conradian_bound: int = 2,
    recurrence_bound: int = 10,
    min_witnesses: int = 3,
    witness_bound: int = 50,
    t_word: tuple[int, ...] = (1, 2),
    search_box: int = 5,
) -> DemoReport:
    """Run the five verification stages; raises StageFailure on any miss."""
    report = DemoReport()

    group = sanov_semidirect()
    oracle = standard_sanov_order(group)
    matrix_group = group.matrix_group()
    t_matrix = matrix_group.evaluate_word(list(t_word))
    if not is_hyperbolic(t_matrix):
        raise StageFailure(
            "hyperbolic_input", f"word {t_word} gives non-hyperbolic {t_matrix}"
        )
    ball = group.ball(ball_radius)

    # 1. conradian at scale
    conradian = conradian_at_scale(oracle, ball, conradian_bound)
    if conradian.status != HOLDS_AT_SCALE:
        raise StageFailure("conradian_at_scale", f"status {conradian.status}")
    report.add(
        "conradian_at_scale",
        conradian.status,
        {"bound": conradian.bound, "pairs": conradian.total},
    )

    # 2. certified non-recurrence
    certificate = non_recurrence_certificate(
        group, oracle, t_word, search_box=search_box
    )
    if certificate is None:
        raise StageFailure("non_recurrence", "no certificate found in the search box")
    recurrent = recurrent_at_scale(
        oracle, ball, recurrence_bound, min_witnesses=min_witnesses
    )
    if recurrent.status != CERTIFIED_FAILURE:
        raise StageFailure("non_recurrence", f"status {recurrent.status}")
    report.add(
        "non_recurrence",
        recurrent.status,
        {
            "start_vector": certificate.start_vector,
            "matrix": certificate.matrix,
            "threshold": certificate.threshold,
            "orbit_prefix": certificate.orbit_prefix,
            "orthant": certificate.orthant,
        },
    )

    # 3. no common eigenline among conjugate hyperbolics
    shear = ((1, 1), (0, 1))
    conjugate = mat_mul(mat_mul(shear, t_matrix), mat_inverse_unimodular(shear))
    shared = common_eigenline(t_matrix, conjugate)
    if shared:
        raise StageFailure("common_eigenline", "conjugates unexpectedly share an eigenline")
    report.add(
        "common_eigenline",
        "distinct_eigenlines",
        {
            "matrix": t_matrix,
            "conjugate": conjugate,
            "eigen_data": [eigen_data(t_matrix), eigen_data(conjugate)],
        },
    )

    # 4. the building blocks surject onto Z
    free_part = Presentation.from_lists(2, [])
    lattice_part = Presentation.from_lists(2, [[1, 2, -1, -2]])
    for name, pres in (("free_rank_2", free_part), ("lattice_z2", lattice_part)):
        if not has_infinite_cyclic_quotient(pres):
            raise StageFailure("indicability", f"{name} lost its cyclic quotient")
    report.add(
        "indicability",
        "infinite_cyclic_quotients",
        {
            "free_rank_2_witness": z_quotient_witness(free_part),
            "lattice_z2_witness": z_quotient_witness(lattice_part),
        },
    )

    # 5. certificate replay
    check_non_recurrence_certificate(certificate, witness_bound=witness_bound)
    report.add("certificate_replay", "replayed", {"witness_bound": witness_bound})

    return report
