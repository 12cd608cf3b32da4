"""Reference algorithms: capacity-blind GREEDY, uniform random search, and the exhaustive side-pattern oracle."""

from __future__ import annotations

import itertools
import time

import numpy as np

from pecco.mfi import side_preference
from pecco.mfo import MfoParams, RunReport, random_position
from pecco.objective import (
    UNALLOCATED,
    AllocationOutcome,
    Evaluator,
    breakdown,
    is_overloaded,
    metrics,
)
from pecco.topology import CostMatrix, NodeKind, all_pairs_optimal_cost
from pecco.workload import Scenario


def run_greedy(scenario: Scenario, costs: CostMatrix | None = None) -> RunReport:
    """Preferred side per task, then the cheapest-to-reach node of that side, ignoring capacity."""
    start = time.perf_counter()
    costs = costs if costs is not None else all_pairs_optimal_cost(scenario.topology)
    topo = scenario.topology
    load = [float(n.cap_min) for n in topo.nodes]
    assignment, sides = [], []
    for task in scenario.tasks:
        side = side_preference(task, scenario, costs)
        sides.append(side is NodeKind.EDGE)
        row = costs.comm[task.initial_node - 1]
        reachable = [(row[v - 1], v) for v in topo.ids_of(side) if np.isfinite(row[v - 1])]
        if not reachable:
            assignment.append(UNALLOCATED)
            continue
        _, node = min(reachable)
        load[node - 1] += task.wl
        assignment.append(node)

    outcome = AllocationOutcome(tuple(assignment), tuple(load))
    result = breakdown(outcome, scenario, costs)
    return RunReport(
        algorithm="greedy",
        seed=0,
        best_position=tuple(side_pattern_position(sides).tolist()),
        outcome=outcome,
        breakdown=result,
        metrics=metrics(outcome, result, scenario),
        history=(result.objective,),
        evaluations=0,
        overloaded=is_overloaded(outcome, scenario),
        wall_ms=(time.perf_counter() - start) * 1000.0,
    )


def run_random_search(scenario: Scenario, costs: CostMatrix | None = None, params: MfoParams | None = None,
                      evaluator: Evaluator | None = None) -> RunReport:
    """Best of ``nsa * max_iter`` uniform positions; history records the best after each block of ``nsa``."""
    start = time.perf_counter()
    params = params or MfoParams()
    evaluator = evaluator or Evaluator(scenario, costs, params.ub)
    rng = np.random.default_rng(params.seed)
    best_pos, best_obj = None, np.inf
    history = []
    budget = params.nsa * params.max_iter
    for q in range(budget):
        pos = random_position(scenario.n_tasks, params.ub, rng)
        obj = evaluator.objective(pos)
        if best_pos is None or obj < best_obj:
            best_pos, best_obj = pos, obj
        if (q + 1) % params.nsa == 0 or q + 1 == budget:
            history.append(float(best_obj))

    outcome, result = evaluator.decode_and_evaluate(best_pos)
    return RunReport(
        algorithm="random",
        seed=params.seed,
        best_position=tuple(best_pos.tolist()),
        outcome=outcome,
        breakdown=result,
        metrics=metrics(outcome, result, scenario),
        history=tuple(history),
        evaluations=budget,
        overloaded=is_overloaded(outcome, scenario),
        wall_ms=(time.perf_counter() - start) * 1000.0,
    )


def side_pattern_position(pattern, ub: float = 1.0) -> np.ndarray:
    """Representative position for a side pattern (True = edge): quarter points of each half."""
    return np.where(np.asarray(pattern, dtype=bool), 0.75 * ub, 0.25 * ub)


MAX_ORACLE_TASKS = 20


def exhaustive_optimum(scenario: Scenario, costs: CostMatrix | None = None, ub: float = 1.0):
    """Minimum objective over the decoder images of all 2^K side patterns.

    Returns ``(best_breakdown, best_pattern)`` with ``best_pattern`` as a tuple of
    NodeKind; ties keep the first pattern in cloud-before-edge lexicographic order.
    """
    K = scenario.n_tasks
    if K > MAX_ORACLE_TASKS:
        raise ValueError(f"exhaustive search limited to {MAX_ORACLE_TASKS} tasks, scenario has {K}")
    evaluator = Evaluator(scenario, costs, ub)
    best, best_pattern = None, None
    for pattern in itertools.product((False, True), repeat=K):
        result = evaluator.evaluate(side_pattern_position(pattern, ub))
        if best is None or result.objective < best.objective:
            best, best_pattern = result, pattern
    kinds = tuple(NodeKind.EDGE if p else NodeKind.CLOUD for p in best_pattern)
    return best, kinds
