"""Shared report types and canonical JSON serialization.

Any finite-scale verdict is tri-state: a property can hold at the tested
scale, fail at the tested scale (inconclusive for the unbounded property),
or fail with a replayable certificate.  Reports carry per-instance witness
tables, truncated deterministically when large.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, is_dataclass, asdict
from fractions import Fraction
from typing import Any

HOLDS_AT_SCALE = "holds_at_scale"
FAILS_AT_SCALE = "fails_at_scale"
CERTIFIED_FAILURE = "certified_failure"

TABLE_CAP = 200


@dataclass
class InstanceOutcome:
    """One tested instance: what was tested, the witness found, or why not."""

    subject: dict
    ok: bool
    witness: Any = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "witness": jsonable(self.witness),
            "note": self.note,
        }


@dataclass
class ScaleReport:
    kind: str
    status: str
    bound: int
    total: int = 0
    held: int = 0
    failed: int = 0
    table: list = field(default_factory=list)
    truncated: bool = False
    budget_exhausted: bool = False
    certificate: Any = None
    note: str = ""

    def holds(self) -> bool:
        return self.status == HOLDS_AT_SCALE

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "status": self.status,
            "bound": self.bound,
            "total": self.total,
            "held": self.held,
            "failed": self.failed,
            "table": [t.to_json() for t in self.table],
            "truncated": self.truncated,
            "budget_exhausted": self.budget_exhausted,
            "note": self.note,
        }
        if self.certificate is not None:
            out["certificate"] = jsonable(self.certificate)
        return out


def build_table(outcomes: list, cap: int = TABLE_CAP) -> tuple[list, bool]:
    """Keep every failing instance first, then passing ones, up to cap."""
    failing = [o for o in outcomes if not o.ok]
    passing = [o for o in outcomes if o.ok]
    table = (failing + passing)[:cap]
    return table, len(outcomes) > len(table)


def jsonable(obj):
    """Recursively convert report objects to JSON-ready values.

    Fractions become exact "p/q" strings; dataclasses use their to_json
    when they have one.
    """
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(x) for x in seq]
    return str(obj)


def canonical_json(obj) -> str:
    """Stable serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"
