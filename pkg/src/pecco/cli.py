"""Command line entry point: ``pecco generate | run | bench | oracle``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace

from pecco.baselines import exhaustive_optimum
from pecco.harness import (
    ALGORITHMS,
    BenchConfig,
    ConfigError,
    algorithm_params,
    load_bench_scenario,
    render_tables,
    run_algorithm,
    run_benchmark,
    write_outputs,
)
from pecco.topology import all_pairs_optimal_cost
from pecco.workload import GeneratorConfig, ScenarioError, generate_scenario, save_scenario

_defaults = BenchConfig()


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common options")
    g.add_argument("--scenario", help="scenario JSON file (default: generate one from the generator flags)")
    g.add_argument("--seed", type=int, default=0, help="run seed, or base seed for bench")
    g.add_argument("--scenario-seed", type=int, default=0, help="seed for the generated scenario")
    g.add_argument("--repeats", type=int, default=_defaults.repeats)
    g.add_argument("--algorithms", default=",".join(ALGORITHMS), help="comma separated subset of " + ",".join(ALGORITHMS))
    g.add_argument("--moths", type=int, default=_defaults.nsa)
    g.add_argument("--iters", type=int, default=_defaults.max_iter)
    g.add_argument("--lambda", dest="lam", type=float, default=None)
    g.add_argument("--ub", type=float, default=_defaults.ub)
    g.add_argument("--b", type=float, default=_defaults.b)
    g.add_argument("--tau-threshold", type=float, default=_defaults.lifetime_threshold)
    g.add_argument("--elitism", action=argparse.BooleanOptionalAction, default=True)
    g.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    g.add_argument("--out", default=None)
    g.add_argument("--n-cloud", type=int, default=GeneratorConfig.n_cloud)
    g.add_argument("--n-edge", type=int, default=GeneratorConfig.n_edge)
    g.add_argument("--n-tasks", type=int, default=GeneratorConfig.n_tasks)
    g.add_argument("--link-density", type=float, default=GeneratorConfig.link_density)
    g.add_argument("--jobs", type=int, default=1, help="parallel runs in bench")
    g.add_argument("--eval-workers", type=int, default=1, help="worker processes for fitness evaluation")
    g.add_argument("--timing", action="store_true", help="record wall-clock times (output no longer reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pecco", description="Profit and cost oriented edge-cloud offloading.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("generate", help="write a synthetic scenario file"))
    p = sub.add_parser("run", help="run one algorithm and print its breakdown and metrics")
    _common(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="mfi")
    _common(sub.add_parser("bench", help="compare algorithms over repeated seeds"))
    _common(sub.add_parser("oracle", help="exhaustive optimum over side patterns (tiny scenarios)"))
    return parser


def config_from_args(args) -> BenchConfig:
    gen = replace(GeneratorConfig(), n_cloud=args.n_cloud, n_edge=args.n_edge, n_tasks=args.n_tasks,
                  link_density=args.link_density)
    return BenchConfig(
        scenario_path=args.scenario,
        generator=gen,
        scenario_seed=args.scenario_seed,
        algorithms=tuple(a.strip() for a in args.algorithms.split(",") if a.strip()),
        repeats=args.repeats,
        base_seed=args.seed,
        nsa=args.moths,
        max_iter=args.iters,
        b=args.b,
        ub=args.ub,
        lifetime_threshold=args.tau_threshold,
        elitism=args.elitism,
        lam=args.lam,
        output_format=args.format,
        out_dir=args.out,
        jobs=args.jobs,
        eval_workers=args.eval_workers,
        record_timing=args.timing,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    cfg = config_from_args(args)
    gen = cfg.generator if args.lam is None else replace(cfg.generator, lam=args.lam)
    data = save_scenario(generate_scenario(gen, args.seed))
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())
    return 0


def cmd_run(args) -> int:
    cfg = config_from_args(args)
    scenario = load_bench_scenario(cfg)
    costs = all_pairs_optimal_cost(scenario.topology)
    report = run_algorithm(args.algorithm, scenario, algorithm_params(cfg, args.algorithm, args.seed), costs=costs)
    doc = {
        "algorithm": report.algorithm,
        "scenario": scenario.name,
        "seed": report.seed,
        "breakdown": asdict(report.breakdown),
        "metrics": report.metrics.as_dict(),
        "degenerate": list(report.metrics.degenerate),
        "overloaded": report.overloaded,
        "evaluations": report.evaluations,
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    cfg = config_from_args(args)
    report = run_benchmark(cfg)
    if cfg.out_dir:
        for path in write_outputs(report, cfg):
            logging.getLogger(__name__).info("wrote %s", path)
    else:
        sys.stdout.write(render_tables(report, cfg.output_format))
    return 0


def cmd_oracle(args) -> int:
    cfg = config_from_args(args)
    scenario = load_bench_scenario(cfg)
    best, pattern = exhaustive_optimum(scenario, ub=cfg.ub)
    doc = {"scenario": scenario.name, "n_tasks": scenario.n_tasks, **asdict(best),
           "pattern": [k.value for k in pattern]}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "bench": cmd_bench, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ScenarioError, ValueError) as exc:
        print(f"pecco {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
