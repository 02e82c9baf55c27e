"""Sweep the randomized invariant suite over a range of seeds.

Usage: python3 scripts/random_invariants.py [n_seeds] [--mutate-cup]
The mutation flag flips a cup-product sign and must make the sweep fail;
use it to confirm the checks can actually catch a broken pairing.
"""

import sys

sys.path.insert(0, "src")

from strat_ic.cli import property_suite


def main(argv):
    mutate = "cup-sign" if "--mutate-cup" in argv else None
    args = [a for a in argv if not a.startswith("--")]
    n = int(args[0]) if args else 10
    bad = 0
    for seed in range(n):
        bundle = property_suite(seed=seed, mutate=mutate)
        rows = bundle.rows
        failed = [r["label"] for r in rows if r["verdict"] is False]
        print("seed %2d: %2d checks, %d failed%s"
              % (seed, len(rows), len(failed),
                 (" (" + ", ".join(failed) + ")") if failed else ""))
        bad += bool(failed)
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
