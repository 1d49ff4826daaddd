#!/usr/bin/env python3
"""Randomized sweep of the Baxter electrostatic bound; prints the tightest cases."""
import argparse
import json

from ltverify.sweeps import run_baxter


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=10 ** 4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--out", default=None, help="write every report as JSON lines")
    a = p.parse_args()
    reps = run_baxter(a.trials, a.seed)
    bad = [r for r in reps if not r.passed]
    print(f"{len(reps)} configurations, {len(bad)} violations")
    # margin relative to the size of the right-hand side
    nontrivial = [r for r in reps if r.lhs or r.rhs]
    tight = sorted(nontrivial, key=lambda r: (r.lhs - r.rhs) / max(abs(r.rhs), 1.0))
    for r in tight[:a.top]:
        print(f"  trial {r.details['trial']:6d}: lhs {r.lhs:12.6f} rhs {r.rhs:12.6f} "
              f"N={r.details.get('N')} M={r.details.get('M')} Z={r.details.get('Z')}")
    if a.out:
        with open(a.out, "w") as fh:
            for r in reps:
                fh.write(json.dumps(r.to_dict()) + "\n")


if __name__ == "__main__":
    main()
