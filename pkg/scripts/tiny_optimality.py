"""Gap between MFI and the exhaustive side-pattern optimum on tiny scenarios."""

import argparse

from pecco.baselines import exhaustive_optimum
from pecco.mfi import MfiParams, run_pecco_mfi
from pecco.topology import all_pairs_optimal_cost
from pecco.workload import GeneratorConfig, generate_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--tasks", type=int, default=6)
    ap.add_argument("--cloud", type=int, default=2)
    ap.add_argument("--edge", type=int, default=2)
    args = ap.parse_args()

    cfg = GeneratorConfig(n_cloud=args.cloud, n_edge=args.edge, n_tasks=args.tasks,
                          capacity_range=(3.0, 6.0), link_density=0.3)
    print("seed  optimum      mfi          gap")
    within = 0
    for s in range(args.seeds):
        scenario = generate_scenario(cfg, s)
        costs = all_pairs_optimal_cost(scenario.topology)
        best, _ = exhaustive_optimum(scenario, costs)
        got = run_pecco_mfi(scenario, MfiParams(seed=s), costs=costs).breakdown.objective
        gap = (got - best.objective) / abs(best.objective)
        within += gap <= 0.05
        print(f"{s:<5d} {best.objective:<12.4f} {got:<12.4f} {gap:.2%}")
    print(f"within 5%: {within}/{args.seeds}")


if __name__ == "__main__":
    main()
