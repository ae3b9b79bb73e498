"""Transversals, near transversals and row covering radius over a seeded latin corpus.

    python3 scripts/latin_bridge.py --max-n 6 --per-order 5 --seed 0
"""
from __future__ import annotations

import argparse

from permcover.latin import count_transversals, latin_corpus, longest_partial_transversal, rows_covering_radius


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--per-order", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("| # | n | transversals | longest partial | rows crad |")
    print("|---|---|---|---|---|")
    for k, L in enumerate(latin_corpus(args.max_n, args.per_order, args.seed)):
        t = count_transversals(L)
        print(f"| {k} | {L.n} | {t} | {len(longest_partial_transversal(L))} | {rows_covering_radius(L)} |", flush=True)


if __name__ == "__main__":
    main()
