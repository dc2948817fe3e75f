#!/usr/bin/env python3
"""Coverage of 90% intervals for a binomial proportion, simulated and exact.

    python3 scripts/coverage_simulation.py [--p 0.1] [--n 348] [--reps 10000] [--seed 2026]

The seed is fixed in advance.  Prints one line per interval method.
"""

import argparse
import time

from medalstats.binom import coverage_simulation


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.1)
    ap.add_argument("--n", type=int, default=348)
    ap.add_argument("--level", type=float, default=0.90)
    ap.add_argument("--reps", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()

    print(f"p={args.p} n={args.n} level={args.level} reps={args.reps} seed={args.seed}")
    for method in ("cd", "wilson"):
        t0 = time.perf_counter()
        r = coverage_simulation(args.p, args.n, args.level, args.reps, args.seed, method)
        dt = time.perf_counter() - t0
        print(f"{method:<7} simulated {r.coverage:.4f}  exact {r.exact:.5f}  ({dt:.2f} s)")


if __name__ == "__main__":
    main()
