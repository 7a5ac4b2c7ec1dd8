"""Configuration-driven command line: one subcommand per task.

Every task reads a JSON config (validated against the shipped schema),
runs the corresponding module, and writes a canonical JSON report --
sorted keys, fixed layout -- so identical configs produce byte-identical
reports.  Wall-clock timing goes to stderr only, keeping the report
deterministic.

Exit codes: 0 property holds / enumeration complete; 1 property refuted
with certificate; 2 inconclusive at the tested scale; 3 usage or config
error; 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction
from importlib import resources

from . import __version__
from ._kernel import backend_name
from .counterexample import StageFailure, demo_counterexample
from .convexity import (
    NonConvexSubgroup,
    convex_at_scale,
    coordinate_zero_subgroup,
    coset_chain_check,
    kernel_lattice_subgroup,
    klein_a_axis,
    maximal_convex_subgroup_zn,
)
from .dynamics import (
    FiniteDynamicalSystem,
    conradian_at_scale,
    poincare_block_verification,
    poincare_return_times,
    recurrent_at_scale,
)
from .groups import BALL_CAP_ENV, group_from_spec
from .indicability import (
    Presentation,
    abelianization,
    has_infinite_cyclic_quotient,
    z_quotient_witness,
)
from .orders import OrderedChain, from_descriptor
from .reports import CERTIFIED_FAILURE, HOLDS_AT_SCALE, canonical_json
from .search import (
    STATUS_CONSISTENT,
    STATUS_EMPTY,
    basic_open_nonempty_at_radius,
    enumerate_cones,
    refute_left_orderability,
)

TASKS = (
    "enumerate-orders",
    "open-set",
    "refute-lo",
    "check-conradian",
    "check-recurrent",
    "convexity",
    "poincare",
    "counterexample",
    "indicable",
)

EXIT_HOLDS = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3
EXIT_INTERNAL = 4

DEFAULT_SEED = 20259


class ConfigError(ValueError):
    pass


def load_config(path: str) -> dict:
    try:
        with open(path) as handle:
            config = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    validate_config(config)
    return config


def validate_config(config: dict) -> None:
    import jsonschema

    schema = json.loads(
        resources.files("ordlab").joinpath("config_schema.json").read_text()
    )
    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        path = "$" + "".join(f"[{p!r}]" for p in first.absolute_path)
        raise ConfigError(f"config invalid at {path}: {first.message}")


def _require(config: dict, *fields: str) -> None:
    missing = [f for f in fields if f not in config]
    if missing:
        raise ConfigError(f"task {config.get('task')!r} requires fields: {missing}")


def _group(config):
    _require(config, "group")
    return group_from_spec(config["group"])


def _oracle(config, group):
    _require(config, "order")
    return from_descriptor(group, config["order"])


def _chain(config, group) -> OrderedChain:
    _require(config, "chain")
    return OrderedChain(tuple(group.evaluate_word(w) for w in config["chain"]))


# ---------------------------------------------------------------------------
# task runners: each returns (verdict, exit_code, result_dict)
# ---------------------------------------------------------------------------


def run_enumerate_orders(config, rng):
    group = _group(config)
    result = enumerate_cones(
        group,
        config.get("radius", 2),
        limit=config.get("limit"),
        strong=config.get("strong", False),
        workers=config.get("workers", 1),
        node_budget=config.get("node_budget", 0),
    )
    payload = {
        "count": len(result),
        "complete": result.complete,
        "radius": result.radius,
        "cones": [list(c.signs) for c in result.cones],
        "elements": [group.describe(g) for g in result.cones[0].ball.elements]
        if result.cones
        else [],
        "note": "complete consistent cones at this radius; extension to genuine orders is not claimed",
    }
    if result.complete:
        return "enumeration_complete", EXIT_HOLDS, payload
    return "enumeration_truncated", EXIT_INCONCLUSIVE, payload


def run_open_set(config, rng):
    group = _group(config)
    chain = _chain(config, group)
    result = basic_open_nonempty_at_radius(
        group,
        config.get("radius", 2),
        chain,
        strong=config.get("strong", False),
        node_budget=config.get("node_budget", 0),
    )
    payload = result.to_json()
    if result.status == STATUS_CONSISTENT:
        return result.status, EXIT_HOLDS, payload
    if result.status == STATUS_EMPTY:
        return result.status, EXIT_REFUTED, payload
    return result.status, EXIT_INCONCLUSIVE, payload


def run_refute_lo(config, rng):
    group = _group(config)
    _require(config, "r_max")
    result = refute_left_orderability(
        group, config["r_max"], node_budget=config.get("node_budget", 0)
    )
    payload = {
        "status": result.status,
        "radius": result.radius,
        "note": result.note,
    }
    if result.certificate is not None:
        payload["certificate"] = result.certificate.to_json()
    if result.status == "refuted":
        return "not_left_orderable", EXIT_REFUTED, payload
    return "inconclusive", EXIT_INCONCLUSIVE, payload


def run_check_conradian(config, rng):
    group = _group(config)
    oracle = _oracle(config, group)
    ball = group.ball(config.get("radius", 2))
    report = conradian_at_scale(oracle, ball, config.get("bound", 5))
    payload = report.to_json()
    if report.status == HOLDS_AT_SCALE:
        return report.status, EXIT_HOLDS, payload
    return report.status, EXIT_INCONCLUSIVE, payload


def run_check_recurrent(config, rng):
    group = _group(config)
    oracle = _oracle(config, group)
    ball = group.ball(config.get("radius", 2))
    report = recurrent_at_scale(
        oracle,
        ball,
        config.get("bound", 10),
        max_chain_len=config.get("max_chain_len", 3),
        min_witnesses=config.get("min_witnesses", 3),
        budget=config.get("budget", 10_000),
        certify=config.get("certify", True),
    )
    payload = report.to_json()
    if report.status == HOLDS_AT_SCALE:
        return report.status, EXIT_HOLDS, payload
    if report.status == CERTIFIED_FAILURE:
        return report.status, EXIT_REFUTED, payload
    return report.status, EXIT_INCONCLUSIVE, payload


def _subgroup(config, group, oracle):
    _require(config, "subgroup")
    spec = config["subgroup"]
    kind = spec.get("kind")
    if kind == "coordinate_zero":
        return coordinate_zero_subgroup(group, spec["zero_coordinates"])
    if kind == "kernel_lattice":
        return kernel_lattice_subgroup(group, spec["functional"])
    if kind == "klein_a_axis":
        return klein_a_axis(group)
    if kind == "maximal_convex":
        return maximal_convex_subgroup_zn(oracle)
    raise ConfigError(f"unknown subgroup kind {kind!r}")


def run_convexity(config, rng):
    group = _group(config)
    oracle = _oracle(config, group)
    subgroup = _subgroup(config, group, oracle)
    ball = group.ball(config.get("radius", 2))
    report = convex_at_scale(oracle, subgroup, ball)
    payload = {"convexity": report.to_json(), "subgroup": subgroup.descriptor}
    if config.get("coset_check") and report.convex:
        payload["coset_order"] = coset_chain_check(oracle, subgroup, ball).to_json()
    if report.convex:
        return "convex_at_scale", EXIT_HOLDS, payload
    return "convexity_violation", EXIT_REFUTED, payload


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def run_poincare(config, rng):
    if "random" in config:
        spec = config["random"]
        count = spec["count"]
        max_points = spec.get("max_points", 64)
        checked = 0
        for _ in range(count):
            system = FiniteDynamicalSystem.random_invariant(rng, max_points)
            subset = [x for x in range(system.size) if rng.random() < 0.4] or [0]
            times = poincare_return_times(system, subset)
            for a, t in times.items():
                if system.weights[a] > 0 and t is None:
                    return (
                        "recurrence_violated",
                        EXIT_INTERNAL,
                        {"system_size": system.size, "point": a},
                    )
            for n in range(1, system.size + 1):
                block = poincare_block_verification(system, subset, n)
                if not block.holds:
                    return "recurrence_violated", EXIT_INTERNAL, {"block": block.to_json()}
            checked += 1
        return (
            "recurrence_verified",
            EXIT_HOLDS,
            {"systems_checked": checked, "max_points": max_points},
        )
    _require(config, "system", "subset")
    spec = config["system"]
    weights = tuple(_parse_fraction(w) for w in spec["weights"])
    labels = tuple(spec.get("labels", [str(i) for i in range(len(weights))]))
    system = FiniteDynamicalSystem(labels, tuple(spec["mapping"]), weights)
    subset = config["subset"]
    times = poincare_return_times(system, subset)
    powers = [config["power"]] if "power" in config else range(1, system.size + 1)
    blocks = [poincare_block_verification(system, subset, n) for n in powers]
    payload = {
        "return_times": {str(a): t for a, t in times.items()},
        "blocks": [b.to_json() for b in blocks],
    }
    ok = all(b.holds for b in blocks) and all(
        t is not None for a, t in times.items() if system.weights[a] > 0
    )
    if ok:
        return "recurrence_verified", EXIT_HOLDS, payload
    return "recurrence_violated", EXIT_INTERNAL, payload


def run_counterexample(config, rng):
    options = config.get("demo", {})
    report = demo_counterexample(
        ball_radius=options.get("ball_radius", 2),
        conradian_bound=options.get("conradian_bound", 2),
        recurrence_bound=options.get("recurrence_bound", 10),
        min_witnesses=options.get("min_witnesses", 3),
        witness_bound=options.get("witness_bound", 50),
        t_word=tuple(options.get("t_word", (1, 2))),
        search_box=options.get("search_box", 5),
    )
    return "conradian_but_not_recurrent", EXIT_REFUTED, report.to_json()


def run_indicable(config, rng):
    _require(config, "presentation")
    spec = config["presentation"]
    presentation = Presentation.from_lists(spec["generators"], spec["relators"])
    snf = abelianization(presentation)
    witness = z_quotient_witness(presentation)
    payload = {
        "invariants": list(snf.invariants),
        "free_rank": snf.free_rank,
        "torsion": list(snf.torsion),
        "abelianization": snf.group_description(),
        "witness": list(witness) if witness else None,
    }
    if has_infinite_cyclic_quotient(presentation):
        return "has_infinite_cyclic_quotient", EXIT_HOLDS, payload
    return "no_infinite_cyclic_quotient", EXIT_REFUTED, payload


RUNNERS = {
    "enumerate-orders": run_enumerate_orders,
    "open-set": run_open_set,
    "refute-lo": run_refute_lo,
    "check-conradian": run_check_conradian,
    "check-recurrent": run_check_recurrent,
    "convexity": run_convexity,
    "poincare": run_poincare,
    "counterexample": run_counterexample,
    "indicable": run_indicable,
}


def run(config: dict) -> tuple[dict, int]:
    """Execute a validated task config; returns (report, exit_code)."""
    validate_config(config)
    task = config["task"]
    seed = config.get("seed", DEFAULT_SEED)
    rng = random.Random(seed)
    if "ball_cap" in config:
        os.environ[BALL_CAP_ENV] = str(config["ball_cap"])
    verdict, code, payload = RUNNERS[task](config, rng)
    report = {
        "task": config,
        "tool": {"name": "ordlab", "version": __version__, "kernel": backend_name()},
        "seed": seed,
        "verdict": verdict,
        "exit_code": code,
        "result": payload,
    }
    return report, code


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordlab",
        description="finite-scale computations with left-invariant group orders",
    )
    parser.add_argument("--version", action="version", version=f"ordlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument(
            "--config",
            required=config_required,
            help="path to the JSON task configuration",
        )
        p.add_argument("--out", help="write the JSON report here (default stdout)")
        p.add_argument("--seed", type=int, help="seed for randomized suites")
        p.add_argument("--workers", type=int, help="parallel workers for enumeration")
        p.add_argument(
            "--strong-propagation",
            action="store_true",
            help="propagate through the double-radius product table",
        )

    run_parser = sub.add_parser("run", help="run the task named in the config")
    add_common(run_parser)
    for task in TASKS:
        p = sub.add_parser(task, help=f"run the {task} task")
        add_common(p, config_required=(task not in ("counterexample",)))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            config = load_config(args.config)
        else:
            config = {"task": args.command}
        if args.command != "run":
            declared = config.get("task")
            if declared is not None and declared != args.command:
                raise ConfigError(
                    f"config task {declared!r} does not match subcommand {args.command!r}"
                )
            config["task"] = args.command
        if args.seed is not None:
            config["seed"] = args.seed
        if args.workers is not None:
            config["workers"] = args.workers
        if args.strong_propagation:
            config["strong"] = True
    except ConfigError as exc:
        print(f"ordlab: {exc}", file=sys.stderr)
        return EXIT_USAGE

    started = time.perf_counter()
    try:
        report, code = run(config)
    except ConfigError as exc:
        print(f"ordlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError, NonConvexSubgroup) as exc:
        print(f"ordlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageFailure as exc:
        print(f"ordlab: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    elapsed = time.perf_counter() - started

    text = canonical_json(report)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    print(
        f"ordlab {config['task']}: {report['verdict']} (exit {code}, {elapsed:.3f}s)",
        file=sys.stderr,
    )
    return code


if __name__ == "__main__":
    sys.exit(main())
