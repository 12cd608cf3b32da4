"""Original Moth-Flame Optimization over offloading positions.

The swarm loop here is shared with the improved optimizer; only the way
each moth picks its pursuit target differs.

RNG discipline per iteration: target-selection draws (none for plain MFO)
in ascending moth index, then one ``(n, K)`` block of spiral parameters
``t``, row-major. Fitness evaluation consumes no randomness.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from pecco.objective import (
    AllocationOutcome,
    Evaluator,
    MetricsReport,
    ObjectiveBreakdown,
    is_overloaded,
    metrics,
)
from pecco.workload import Scenario


@dataclass(frozen=True)
class MfoParams:
    nsa: int = 30
    max_iter: int = 100
    b: float = 1.0
    ub: float = 1.0
    elitism: bool = True
    seed: int = 0
    # >1 farms fitness evaluation out to worker processes; results are identical
    workers: int = 1
    lb: float = field(default=0.0, init=False)

    def __post_init__(self):
        if self.nsa < 2:
            raise ValueError("nsa must be at least 2")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.ub > self.lb:
            raise ValueError("ub must exceed lb (0)")


@dataclass(frozen=True)
class RunReport:
    algorithm: str
    seed: int
    best_position: tuple[float, ...]
    outcome: AllocationOutcome
    breakdown: ObjectiveBreakdown
    metrics: MetricsReport
    history: tuple[float, ...]  # best objective after each iteration
    evaluations: int
    overloaded: bool = False
    wall_ms: float = field(default=0.0, compare=False)


def random_position(K: int, ub: float, rng) -> np.ndarray:
    """Uniform position in ``[0, ub]^K``; consumes exactly K draws in coordinate order."""
    lb = 0.0
    return (ub - lb) * np.asarray(rng.random(K), dtype=float) + lb


def flame_count(n: int, ci: int, mi: int) -> int:
    """Surviving flames at iteration ``ci`` of ``mi``, rounded half away from zero."""
    exact = Fraction(n) - Fraction(ci * (n - 1), mi)
    k = math.floor(exact + Fraction(1, 2))
    return max(1, min(n, k))


def spiral_step(moth, target, b: float, t, ub: float = 1.0) -> np.ndarray:
    """Logarithmic spiral move of ``moth`` around ``target``, clamped to ``[0, ub]``.

    Works element-wise, so whole populations can be moved at once.
    """
    moth = np.asarray(moth, dtype=float)
    target = np.asarray(target, dtype=float)
    t = np.asarray(t, dtype=float)
    distance = np.abs(target - moth)
    moved = distance * np.exp(b * t) * np.cos(2 * np.pi * t) + target
    return np.clip(moved, 0.0, ub)


def mfo_pair(i: int, k: int) -> int:
    """1-based flame index pursued by moth ``i`` when ``k`` flames survive."""
    return i if i <= k else k


def spiral_lower_bound(ci: int, mi: int) -> float:
    """Lower end ``r`` of the spiral parameter range, linear from -1 to -2."""
    if mi == 1:
        return -1.0
    return -1.0 - (ci - 1) / (mi - 1)


# Worker-process state for parallel fitness evaluation.
_worker_evaluator: Evaluator | None = None


def _init_worker(scenario, costs, ub):
    global _worker_evaluator
    _worker_evaluator = Evaluator(scenario, costs, ub)


def _worker_objective(position):
    return _worker_evaluator.objective(position)


class _Fitness:
    def __init__(self, evaluator: Evaluator, workers: int):
        self.evaluator = evaluator
        self.count = 0
        self.pool = None
        if workers > 1:
            self.pool = ProcessPoolExecutor(
                max_workers=workers, initializer=_init_worker,
                initargs=(evaluator.scenario, evaluator.costs, evaluator.ub))

    def __call__(self, positions: np.ndarray) -> np.ndarray:
        self.count += len(positions)
        if self.pool is None:
            return np.array([self.evaluator.objective(p) for p in positions])
        return np.array(list(self.pool.map(_worker_objective, list(positions), chunksize=4)))

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def select_flames(prev_flames, prev_fitness, moths, moth_fitness, k: int, elitism: bool):
    """Best ``k`` candidates sorted ascending by objective.

    With elitism the previous flames compete with the current moths (ties
    keep the older flame); otherwise only the current moths are ranked.
    """
    if elitism and prev_flames is not None:
        pool = np.vstack([prev_flames, moths])
        fit = np.concatenate([prev_fitness, moth_fitness])
    else:
        pool, fit = moths, moth_fitness
    order = np.argsort(fit, kind="stable")[:k]
    return pool[order].copy(), fit[order].copy()


# target_fn(flames, k, ci, mi, rng) -> (n, K) array of pursuit targets
TargetFn = Callable[[np.ndarray, int, int, int, np.random.Generator], np.ndarray]


def run_swarm(evaluator: Evaluator, moths: np.ndarray, params: MfoParams, rng: np.random.Generator,
              target_fn: TargetFn, algorithm: str) -> RunReport:
    start = time.perf_counter()
    n, K = moths.shape
    fitness = _Fitness(evaluator, params.workers)
    flames = flame_fit = None
    history = []
    try:
        for ci in range(1, params.max_iter + 1):
            moth_fit = fitness(moths)
            k = flame_count(n, ci, params.max_iter)
            flames, flame_fit = select_flames(flames, flame_fit, moths, moth_fit, k, params.elitism)
            history.append(float(flame_fit[0]))

            targets = target_fn(flames, k, ci, params.max_iter, rng)
            r = spiral_lower_bound(ci, params.max_iter)
            t = rng.uniform(r, 1.0, size=(n, K))
            moths = spiral_step(moths, targets, params.b, t, params.ub)
    finally:
        fitness.close()

    best = flames[0]
    outcome, result = evaluator.decode_and_evaluate(best)
    return RunReport(
        algorithm=algorithm,
        seed=params.seed,
        best_position=tuple(best.tolist()),
        outcome=outcome,
        breakdown=result,
        metrics=metrics(outcome, result, evaluator.scenario),
        history=tuple(history),
        evaluations=fitness.count,
        overloaded=is_overloaded(outcome, evaluator.scenario),
        wall_ms=(time.perf_counter() - start) * 1000.0,
    )


def run_mfo(scenario: Scenario, params: MfoParams | None = None, initial_positions=None,
            costs=None, evaluator: Evaluator | None = None) -> RunReport:
    params = params or MfoParams()
    evaluator = evaluator or Evaluator(scenario, costs, params.ub)
    rng = np.random.default_rng(params.seed)
    K = scenario.n_tasks
    if initial_positions is None:
        moths = np.array([random_position(K, params.ub, rng) for _ in range(params.nsa)])
    else:
        moths = np.array(initial_positions, dtype=float)
        if moths.shape != (params.nsa, K):
            raise ValueError(f"initial positions must have shape ({params.nsa}, {K}), got {moths.shape}")

    def targets(flames, k, ci, mi, rng):
        return flames[[mfo_pair(i, k) - 1 for i in range(1, params.nsa + 1)]]

    return run_swarm(evaluator, moths, params, rng, targets, "mfo")
