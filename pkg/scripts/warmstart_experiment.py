#!/usr/bin/env python3
"""How much does the cutting-plane warm start save over cold Newton?

Solves a random batch twice per instance (Newton from the singleton upper
bound vs the full dual pipeline) and prints the iteration-count
distributions; optionally writes the per-instance rows as CSV.

Usage: python scripts/warmstart_experiment.py [--count 40] [--seed 1] [--out f.csv]
"""

import argparse
import collections
import csv
import sys

from polyls import discrete_newton, solve_dual
from polyls.instances import FAMILIES, random_instance


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=40, help="instances per family")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", help="optional CSV path")
    args = ap.parse_args()

    rows = []
    cold_hist = collections.Counter()
    warm_hist = collections.Counter()
    for fam in FAMILIES:
        for i in range(args.count):
            n = 1 + i % 12
            f, d = random_instance(fam, n, args.seed + i).build()
            cold = discrete_newton(f, d)
            warm = solve_dual(f, d)
            assert cold.lambda_star == warm.lambda_star
            cold_hist[cold.newton_iterations] += 1
            warm_hist[warm.newton_iterations] += 1
            rows.append([fam, n, args.seed + i, cold.newton_iterations,
                         warm.newton_iterations, warm.engine_iterations])

    total = len(rows)
    print(f"{total} instances over {len(FAMILIES)} families")
    print("newton iterations, cold start :",
          dict(sorted(cold_hist.items())))
    print("newton iterations, dual start :",
          dict(sorted(warm_hist.items())))
    not_worse = sum(1 for r in rows if r[4] <= r[3])
    print(f"dual start not worse than cold on {not_worse}/{total} "
          f"({not_worse / total:.1%})")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["family", "n", "seed", "newton_iters_cold",
                        "newton_iters_dual", "engine_iterations"])
            w.writerows(rows)
        print(f"rows written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
