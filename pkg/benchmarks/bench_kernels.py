"""Compare the compiled cone-search kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

The workload is full cone enumeration (the hot loop: sign propagation plus
depth-first search over a ball's product table) on a spread of backends.
Both kernels run the identical flat-array interface; outputs are checked
to be equal before timings are reported.
"""

import argparse
import time
from array import array

from ordlab._kernel import BACKEND, pycore

try:
    from ordlab._kernel import _conecore as compiled
except ImportError:
    compiled = None

from ordlab.groups import FreeAbelian, FreeGroup, KleinBottle, sanov_semidirect


def tables_for(group, radius):
    ball = group.ball(radius)
    n = len(ball)
    inv = array("i", ball.inverse_table())
    prod = ball.product_table()
    decisions = [i for i in range(n) if i != ball.identity_index]
    return n, ball.identity_index, inv, prod, decisions


WORKLOADS = [
    ("Z^2 ball(3)", FreeAbelian(2), 3),
    ("Klein bottle ball(6)", KleinBottle(), 6),
    ("free group F2 ball(3)", FreeGroup(2), 3),
    ("free group F2 ball(4)", FreeGroup(2), 4),
    ("Sanov semidirect ball(2)", sanov_semidirect(), 2),
]


def run(kernel, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = kernel.enumerate_complete(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    options = parser.parse_args()

    print(f"active kernel backend: {BACKEND}")
    if compiled is None:
        print("compiled kernel unavailable; timing the pure kernel only\n")
    header = f"{'workload':<28} {'cones':>7} {'python':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, group, radius in WORKLOADS:
        n, e, inv, prod, decisions = tables_for(group, radius)
        args = (n, e, inv, prod, decisions, [], 200_000, 0)
        py_time, py_result = run(pycore, args, options.repeat)
        if compiled is not None:
            c_time, c_result = run(compiled, args, options.repeat)
            assert c_result == py_result, f"kernel outputs diverge on {label}"
            speedup = py_time / c_time if c_time else float("inf")
            print(
                f"{label:<28} {len(py_result[1]):>7} {py_time:>9.3f}s {c_time:>9.3f}s {speedup:>7.1f}x"
            )
        else:
            print(f"{label:<28} {len(py_result[1]):>7} {py_time:>9.3f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
