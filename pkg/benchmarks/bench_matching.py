#!/usr/bin/env python3
"""Benchmark the compiled matching kernel against the pure-Python fallback.

Generates random integer cost matrices shaped like real snapshot
comparisons (small delta counts, plenty of ties), solves each with both
lanes, verifies the results agree, and prints a timing table.

Usage:
    python3 benchmarks/bench_matching.py [--sizes 20,50,100,200] [--repeat 3]
"""

import argparse
import random
import time

from archdd._matchcore_py import lexmin_assignment as pure_lane

try:
    from archdd._matchcore import lexmin_assignment as compiled_lane
except ImportError:
    compiled_lane = None


def random_costs(rng, n):
    # mimic snapshot matching: mostly mid-sized costs, a cheap near-diagonal
    costs = [rng.randint(20, 60) for _ in range(n * n)]
    for i in range(n):
        costs[i * n + i] = rng.randint(0, 4)
    return costs


def time_lane(solver, instances, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        started = time.perf_counter()
        result = [solver(costs, n) for costs, n in instances]
        best = min(best, time.perf_counter() - started)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,50,100,200")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--instances", type=int, default=5, help="matrices per size")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]

    if compiled_lane is None:
        print("compiled kernel not built; benchmarking pure-Python lane only\n")

    header = f"{'n':>5}  {'pure (s)':>10}  {'compiled (s)':>13}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    rng = random.Random(1)
    for n in sizes:
        instances = [(random_costs(rng, n), n) for _ in range(args.instances)]
        pure_time, pure_result = time_lane(pure_lane, instances, args.repeat)
        if compiled_lane is None:
            print(f"{n:>5}  {pure_time:>10.4f}  {'-':>13}  {'-':>8}")
            continue
        compiled_time, compiled_result = time_lane(compiled_lane, instances, args.repeat)
        if pure_result != compiled_result:
            raise SystemExit(f"lane mismatch at n={n}")
        speedup = pure_time / compiled_time if compiled_time else float("inf")
        print(f"{n:>5}  {pure_time:>10.4f}  {compiled_time:>13.4f}  {speedup:>7.1f}x")
    print(f"\n({args.instances} matrices per size, best of {args.repeat} runs; "
          "lanes verified to agree)")


if __name__ == "__main__":
    main()
