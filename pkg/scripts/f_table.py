"""Table of f(n, s) with its counting bounds and the greedy / local-search covers.

    python3 scripts/f_table.py --max-n 5
    python3 scripts/f_table.py --max-n 6 --budget 2000000   # n = 6 rows may stop early
"""
from __future__ import annotations

import argparse
import math
import time

from permcover.counting import ball_size, bounds_report
from permcover.cover_solver import f_exact, greedy_cover, harmonic_cap


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--budget", type=int, default=10**9)
    args = ap.parse_args()

    print("| n | s | b | ceil(n!/b) | best lower | f | status | nodes | greedy | harmonic cap | seconds |")
    print("|---|---|---|---|---|---|---|---|---|---|---|")
    for n in range(1, args.max_n + 1):
        for s in range(1, n + 1):
            b = ball_size(n, n - s)
            t = time.perf_counter()
            res = f_exact(n, s, budget=args.budget)
            elapsed = time.perf_counter() - t
            print(
                f"| {n} | {s} | {b} | {math.ceil(math.factorial(n) / b)} | {bounds_report(n, s).best_lower()} "
                f"| {res.size} | {res.status} | {res.nodes_explored} | {len(greedy_cover(n, s))} "
                f"| {harmonic_cap(n, s)} | {elapsed:.1f} |",
                flush=True,
            )


if __name__ == "__main__":
    main()
