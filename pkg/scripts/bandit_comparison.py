"""Compare Whittle's policy, the baselines and the brute-force optimum on random instances.

    python3 scripts/bandit_comparison.py --instances 50 --arms 2 --horizon 8
"""
import argparse
import csv
import random
import statistics
import sys
from pathlib import Path

from whittle_kf.bandit import WhittlePolicy, baseline_policies, brute_force_optimal, random_instance, simulate_policy
from whittle_kf.io import fmt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--arms", type=int, default=2)
    ap.add_argument("--horizon", type=int, default=8)
    ap.add_argument("--m-active", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/bandit_comparison.csv")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    rows = []
    for k in range(args.instances):
        inst = random_instance(rng, args.arms, args.horizon, args.m_active)
        row = {"instance": k, "beta": fmt(inst.beta), "tail_bound": fmt(inst.tail_bound()),
               "optimal": fmt(brute_force_optimal(inst).discounted_cost),
               "whittle": fmt(simulate_policy(inst, WhittlePolicy()).discounted_cost)}
        for name, pol in baseline_policies(k).items():
            row[name] = fmt(simulate_policy(inst, pol).discounted_cost)
        rows.append(row)
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    for name in ["whittle"] + list(baseline_policies()):
        excess = [float(r[name]) / float(r["optimal"]) - 1 for r in rows]
        print(f"{name:14s} mean excess {100 * statistics.mean(excess):7.3f}%  max {100 * max(excess):7.3f}%",
              file=sys.stdout)


if __name__ == "__main__":
    main()
