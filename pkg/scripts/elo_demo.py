#!/usr/bin/env python3
"""Simulated Elo voting session over a list of tool expectations.

Seeds a pool, plays a few hundred matches against a noisy ground-truth
preference, and prints the standings next to that ground truth.

Run: python3 scripts/elo_demo.py [--matches 300] [--seed 5]
"""

import argparse
import random

from sbfl.elo import EloPool, next_pair, record_match, standings

LABELS = [
    "clearer error messages",
    "faster test runs",
    "one-click rerun of failing tests",
    "hierarchical results view",
    "explainable scores",
    "shareable session links",
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--matches", type=int, default=300)
    parser.add_argument("--seed", type=int, default=5)
    args = parser.parse_args()

    pool = EloPool.from_labels(LABELS, seed=args.seed)
    truth = {item_id: len(LABELS) - i for i, item_id in enumerate(sorted(pool.items))}
    rng = random.Random(args.seed)

    for _ in range(args.matches):
        a, b = next_pair(pool)
        # noisy voter: usually prefers the higher ground-truth item
        prefer_a = truth[a] > truth[b]
        if rng.random() < 0.15:
            prefer_a = not prefer_a
        record_match(pool, a, b, "a" if prefer_a else "b")

    print(f"{'RATING':>8}  {'PLAYED':>6}  {'TRUTH':>5}  LABEL")
    for item_id, rating, played in standings(pool):
        print(f"{rating:>8.1f}  {played:>6}  {truth[item_id]:>5}  {pool.items[item_id].label}")


if __name__ == "__main__":
    main()
