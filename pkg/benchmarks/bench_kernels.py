"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on the same ball with both backends and prints the
timings plus speedup.  Usage::

    python3 benchmarks/bench_kernels.py [--ball 6] [--amax 3] [--family 0..2]
"""

import argparse
import time

from bicext import kernels
from bicext.balls import make_ball
from bicext.core import parse_family


def _time(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", default="0..2")
    parser.add_argument("--ball", type=int, default=6)
    parser.add_argument("--amax", type=int, default=None)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; only the pure backend is "
              "available — nothing to compare")
        return

    fam = parse_family(args.family)
    amax = args.amax
    if amax is None:
        amax = min(fam.span, 4) if fam.span is not None else 4
    ball = make_ball(fam, args.ball, amax)
    co = ball.coords
    lo = ball.cutoffs.start
    ncut = len(ball.cutoffs)
    n = len(ball)
    print(f"family {fam.text()}, ball N={ball.N}, A={ball.amax} "
          f"({n} elements)\n")

    table = backends["compiled"].product_table(*co, ball.N, lo, ncut)
    gens = [0, n // 2, 1, n - 1]

    cases = [
        ("product_table", lambda m: m.product_table(*co, ball.N, lo, ncut)),
        ("assoc_violation", lambda m: m.assoc_violation(*co)),
        ("retraction_scan", lambda m: m.retraction_scan(*co, 1)),
        ("closure_fixpoint", lambda m: m.closure_fixpoint(table, n, gens)),
    ]
    header = f"{'kernel':18s} {'pure':>10s} {'compiled':>10s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_pure, r_pure = _time(call, backends["pure"])
        t_fast, r_fast = _time(call, backends["compiled"])
        r_pure = list(r_pure) if hasattr(r_pure, "__len__") else r_pure
        r_fast = list(r_fast) if hasattr(r_fast, "__len__") else r_fast
        agree = "" if r_pure == r_fast else "  RESULTS DIFFER!"
        print(f"{name:18s} {t_pure*1e3:9.1f}ms {t_fast*1e3:9.1f}ms "
              f"{t_pure/max(t_fast, 1e-9):8.1f}x{agree}")


if __name__ == "__main__":
    main()
