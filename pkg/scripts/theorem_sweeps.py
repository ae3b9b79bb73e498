"""Run the seeded theorem sweeps at a chosen scale and print one summary per sweep.

    python3 scripts/theorem_sweeps.py --trials 2000 --seed 1
"""
from __future__ import annotations

import argparse
import time

from permcover.sweeps import SweepConfig, klight_sweep, light_rainbow_sweep, near_transversal_sweep, reduction_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    orders = tuple(range(4, args.max_n + 1))

    runs = [
        (light_rainbow_sweep, SweepConfig("light", orders, args.trials, seed=args.seed, exhaustive_order=3)),
        (klight_sweep, SweepConfig("klight", orders, args.trials, s=3, seed=args.seed)),
        (klight_sweep, SweepConfig("klight", (args.max_n,), args.trials, s=9, seed=args.seed)),
        (reduction_sweep, SweepConfig("reduce", (4, 5), args.trials, seed=args.seed)),
        (near_transversal_sweep, SweepConfig("latin", (7,), max(1, args.trials // 50), seed=args.seed)),
    ]
    failed = False
    for fn, cfg in runs:
        t = time.perf_counter()
        res = fn(cfg)
        print(res.to_structured() + f"seconds={time.perf_counter() - t:.1f}\n", flush=True)
        for v in res.violations:
            failed = True
            print(v)
    raise SystemExit(3 if failed else 0)


if __name__ == "__main__":
    main()
