"""Multi-seed benchmark runner, aggregation, and table/CSV rendering."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from pecco.baselines import run_greedy, run_random_search
from pecco.mfi import MfiParams, run_pecco_mfi
from pecco.mfo import MfoParams, RunReport, run_mfo
from pecco.objective import METRIC_FIELDS, Evaluator, MetricsReport
from pecco.topology import CostMatrix, all_pairs_optimal_cost
from pecco.workload import GeneratorConfig, Scenario, generate_scenario, load_scenario

log = logging.getLogger(__name__)

ALGORITHMS = ("mfi", "mfo", "greedy", "random")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BenchConfig:
    scenario_path: str | None = None
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    scenario_seed: int = 0
    algorithms: tuple[str, ...] = ALGORITHMS
    repeats: int = 10
    base_seed: int = 0
    nsa: int = 30
    max_iter: int = 100
    b: float = 1.0
    ub: float = 1.0
    lifetime_threshold: float = 0.8
    elitism: bool = True
    lam: float | None = None  # overrides the scenario's lambda when set
    # per-algorithm overrides of the fields above, e.g. {"mfo": {"nsa": 40}}
    overrides: dict = field(default_factory=dict)
    output_format: str = "markdown"
    out_dir: str | None = None
    jobs: int = 1
    eval_workers: int = 1
    # wall-clock times make output non-reproducible, so they are opt-in
    record_timing: bool = False

    def validate(self) -> None:
        if self.repeats < 1:
            raise ConfigError("repeats must be at least 1")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ConfigError(f"unknown algorithm(s): {', '.join(unknown)}; choose from {', '.join(ALGORITHMS)}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("algorithms must not repeat")
        if self.output_format not in ("markdown", "csv"):
            raise ConfigError("format must be 'markdown' or 'csv'")
        if self.lam is not None and not self.lam < 0:
            raise ConfigError("lambda must be negative")


@dataclass(frozen=True)
class RunRow:
    algorithm: str
    repeat: int
    seed: int
    metrics: MetricsReport | None
    overloaded: bool
    wall_ms: float
    history: tuple[float, ...]
    error: str | None = None


@dataclass
class BenchReport:
    scenario_name: str
    algorithms: tuple[str, ...]
    rows: list[RunRow]
    # algorithm -> metric -> (mean, std) over successful repeats
    summary: dict[str, dict[str, tuple[float, float]]]
    overloaded: dict[str, bool]
    degenerate: dict[str, tuple[str, ...]]


def load_bench_scenario(cfg: BenchConfig) -> Scenario:
    if cfg.scenario_path:
        try:
            with open(cfg.scenario_path, "rb") as fh:
                scenario = load_scenario(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read scenario {cfg.scenario_path}: {exc}") from exc
    else:
        scenario = generate_scenario(cfg.generator, cfg.scenario_seed)
    if cfg.lam is not None:
        scenario = replace(scenario, lam=float(cfg.lam))
    return scenario


def algorithm_params(cfg: BenchConfig, algorithm: str, seed: int):
    values = dict(nsa=cfg.nsa, max_iter=cfg.max_iter, b=cfg.b, ub=cfg.ub, elitism=cfg.elitism,
                  seed=seed, workers=cfg.eval_workers, lifetime_threshold=cfg.lifetime_threshold)
    values.update(cfg.overrides.get(algorithm, {}))
    if algorithm == "mfi":
        return MfiParams(**values)
    values.pop("lifetime_threshold")
    return MfoParams(**values)


def run_algorithm(algorithm: str, scenario: Scenario, params, costs: CostMatrix | None = None,
                  evaluator: Evaluator | None = None) -> RunReport:
    if algorithm == "mfi":
        return run_pecco_mfi(scenario, params, costs=costs, evaluator=evaluator)
    if algorithm == "mfo":
        return run_mfo(scenario, params, costs=costs, evaluator=evaluator)
    if algorithm == "greedy":
        return run_greedy(scenario, costs if costs is not None else evaluator.costs)
    if algorithm == "random":
        return run_random_search(scenario, costs, params, evaluator=evaluator)
    raise ConfigError(f"unknown algorithm {algorithm!r}")


def _execute(job) -> RunRow:
    algorithm, repeat, seed, scenario, costs, params = job
    try:
        report = run_algorithm(algorithm, scenario, params, costs=costs)
    except Exception as exc:  # per-run failures are recorded, not fatal
        log.exception("run %s/%d failed", algorithm, repeat)
        return RunRow(algorithm, repeat, seed, None, False, 0.0, (), f"{type(exc).__name__}: {exc}")
    return RunRow(algorithm, repeat, seed, report.metrics, report.overloaded, report.wall_ms, report.history)


def _mean_std(values: list[float]) -> tuple[float, float]:
    # summation in ascending repeat order; sample standard deviation
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0
    return mean, math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))


def aggregate(rows: list[RunRow], algorithms) -> tuple[dict, dict, dict]:
    summary, overloaded, degenerate = {}, {}, {}
    for alg in algorithms:
        ok = sorted((r for r in rows if r.algorithm == alg and r.metrics is not None), key=lambda r: r.repeat)
        overloaded[alg] = any(r.overloaded for r in ok)
        degenerate[alg] = tuple(sorted({d for r in ok for d in r.metrics.degenerate}))
        if ok:
            summary[alg] = {m: _mean_std([getattr(r.metrics, m) for r in ok]) for m in METRIC_FIELDS}
    return summary, overloaded, degenerate


def run_benchmark(cfg: BenchConfig) -> BenchReport:
    cfg.validate()
    scenario = load_bench_scenario(cfg)
    costs = all_pairs_optimal_cost(scenario.topology)
    jobs = []
    for alg in cfg.algorithms:
        for repeat in range(cfg.repeats):
            seed = cfg.base_seed + repeat
            jobs.append((alg, repeat, seed, scenario, costs, algorithm_params(cfg, alg, seed)))

    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_execute, jobs))
    else:
        rows = [_execute(job) for job in jobs]
    order = {a: i for i, a in enumerate(cfg.algorithms)}
    rows.sort(key=lambda r: (order[r.algorithm], r.repeat))
    if not cfg.record_timing:
        rows = [replace(r, wall_ms=0.0) for r in rows]

    summary, overloaded, degenerate = aggregate(rows, cfg.algorithms)
    return BenchReport(scenario.name, tuple(cfg.algorithms), rows, summary, overloaded, degenerate)


BENCH_COLUMNS = ("algorithm", "repeat", "objective", "profit", "cost", "profit_cost_ratio", "allocated",
                 "profit_per_alloc", "cost_per_alloc", "utilization_pct", "profit_per_util", "cost_per_util",
                 "overloaded", "wall_ms")


def _num(x: float) -> str:
    return repr(float(x))


def bench_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for r in report.rows:
        if r.metrics is None:
            writer.writerow([r.algorithm, r.repeat] + [""] * 10 + ["", f"error: {r.error}"])
            continue
        m = r.metrics
        writer.writerow([r.algorithm, r.repeat] + [_num(getattr(m, f)) for f in METRIC_FIELDS]
                        + [int(r.overloaded), _num(round(r.wall_ms, 3))])
    return buf.getvalue()


def convergence_csv(row: RunRow) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("iteration", "best_objective"))
    for i, value in enumerate(row.history, start=1):
        writer.writerow((i, _num(value)))
    return buf.getvalue()


# (label, metric field, kind) per table row; kind picks the cell format
TABLES = (
    ("Objective, profit and cost", (
        ("Overall Objective", "objective", "money"),
        ("Profit", "profit", "money"),
        ("Cost", "cost", "money"),
        ("Profit/Cost Ratio", "profit_cost_ratio", "ratio"),
    )),
    ("Task allocation", (
        ("#Allocation", "allocated_count", "count"),
        ("Profit/Allocation Ratio", "profit_per_allocation", "ratio"),
        ("Cost/Allocation Ratio", "cost_per_allocation", "ratio"),
    )),
    ("Resource utilisation", (
        ("Utilisation", "utilization_percent", "percent"),
        ("Profit/Utilisation Ratio", "profit_per_utilization", "ratio"),
        ("Cost/Utilisation Ratio", "cost_per_utilization", "ratio"),
    )),
)


def format_cell(value: float, kind: str, overloaded: bool = False, degenerate: bool = False) -> str:
    if kind == "count":
        text = f"{value:.1f}"
    elif kind == "percent":
        text = f"{value:.2f}%"
        if overloaded:
            text = f"({text})"
    else:
        text = f"{value:.2f}"
    return text + ("*" if degenerate else "")


def improvement(other: float, mfi: float) -> float:
    """Relative objective reduction of MFI versus another algorithm."""
    return (other - mfi) / abs(other) if other != 0 else 0.0


def render_tables(report: BenchReport, fmt: str = "markdown") -> str:
    algs = [a for a in report.algorithms if a in report.summary]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["algorithm"] + [f"{m}_mean" for m in METRIC_FIELDS] + [f"{m}_std" for m in METRIC_FIELDS]
                        + ["overloaded", "degenerate"])
        for a in algs:
            s = report.summary[a]
            writer.writerow([a] + [_num(s[m][0]) for m in METRIC_FIELDS] + [_num(s[m][1]) for m in METRIC_FIELDS]
                            + [int(report.overloaded[a]), ";".join(report.degenerate[a])])
        return buf.getvalue()
    if fmt != "markdown":
        raise ConfigError(f"unknown format {fmt!r}")

    out = [f"# Benchmark: {report.scenario_name}", ""]
    for title, rows in TABLES:
        out += [f"## {title}", "", "| Value | " + " | ".join(a.upper() for a in algs) + " |",
                "|---|" + "---|" * len(algs)]
        for label, metric, kind in rows:
            cells = [format_cell(report.summary[a][metric][0], kind,
                                 overloaded=report.overloaded[a] and metric == "utilization_percent",
                                 degenerate=metric in report.degenerate[a]) for a in algs]
            out.append(f"| {label} | " + " | ".join(cells) + " |")
        out.append("")
    if "mfi" in algs and len(algs) > 1:
        out += ["## Objective reduction of MFI", "", "| Versus | Reduction |", "|---|---|"]
        mfi = report.summary["mfi"]["objective"][0]
        for a in algs:
            if a != "mfi":
                out.append(f"| {a.upper()} | {100 * improvement(report.summary[a]['objective'][0], mfi):.2f}% |")
        out.append("")
    notes = []
    if any(report.overloaded[a] for a in algs):
        notes.append("Parenthesised utilisation: at least one node exceeded its capacity.")
    if any(report.degenerate[a] for a in algs):
        notes.append("*: zero denominator in at least one repeat, ratio reported as 0.")
    failed = [r for r in report.rows if r.error]
    if failed:
        notes.append(f"{len(failed)} run(s) failed and were excluded.")
    out += notes
    return "\n".join(out).rstrip() + "\n"


def write_outputs(report: BenchReport, cfg: BenchConfig) -> list[str]:
    os.makedirs(cfg.out_dir, exist_ok=True)
    written = []

    def put(name, text):
        path = os.path.join(cfg.out_dir, name)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        written.append(path)

    put("bench.csv", bench_csv(report))
    put("tables.md" if cfg.output_format == "markdown" else "summary.csv", render_tables(report, cfg.output_format))
    for row in report.rows:
        if row.history:
            put(f"convergence_{row.algorithm}_{row.repeat}.csv", convergence_csv(row))
    return written
