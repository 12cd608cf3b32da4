"""Paired MFI vs MFO comparison on seeded default scenarios.

    python3 scripts/ablation.py --seeds 10 --out results/ablation.csv
"""

import argparse
import csv
import sys

from pecco.mfi import MfiParams, run_pecco_mfi
from pecco.mfo import MfoParams, run_mfo
from pecco.topology import all_pairs_optimal_cost
from pecco.workload import GeneratorConfig, generate_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--iters", type=int, default=100)
    ap.add_argument("--moths", type=int, default=30)
    ap.add_argument("--out", default=None, help="CSV path (default: stdout)")
    args = ap.parse_args()

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh)
    writer.writerow(["seed", "mfi_objective", "mfo_objective", "reduction", "mfi_utilization", "mfo_utilization"])
    wins, total_mfi, total_mfo = 0, 0.0, 0.0
    for s in range(args.seeds):
        scenario = generate_scenario(GeneratorConfig(), s)
        costs = all_pairs_optimal_cost(scenario.topology)
        mfi = run_pecco_mfi(scenario, MfiParams(nsa=args.moths, max_iter=args.iters, seed=s), costs=costs)
        mfo = run_mfo(scenario, MfoParams(nsa=args.moths, max_iter=args.iters, seed=s), costs=costs)
        a, b = mfi.breakdown.objective, mfo.breakdown.objective
        wins += a < b
        total_mfi += a
        total_mfo += b
        writer.writerow([s, repr(a), repr(b), f"{(b - a) / abs(b):.6f}",
                         f"{mfi.metrics.utilization_percent:.4f}", f"{mfo.metrics.utilization_percent:.4f}"])
        fh.flush()
    n = args.seeds
    print(f"MFI wins {wins}/{n}; mean MFI {total_mfi / n:.2f}, mean MFO {total_mfo / n:.2f}", file=sys.stderr)
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
