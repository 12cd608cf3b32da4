"""Improved moth-flame optimizer for offloading.

Three changes over plain MFO:

* moths start from a profit/cost-aware, density-merged population;
* every pursuit target blends the moth's flame with the top-2/3 leader flames,
  weighted by ``omega = CI / MI``;
* moths whose flame was eliminated draw a lifetime value: above the
  threshold they chase a freshly randomised flame, otherwise a uniformly
  chosen surviving one (both still blended with the leaders).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pecco.mfo import MfoParams, RunReport, random_position, run_swarm
from pecco.objective import Evaluator
from pecco.topology import CostMatrix, NodeKind
from pecco.workload import Scenario, Task


@dataclass(frozen=True)
class MfiParams(MfoParams):
    lifetime_threshold: float = 0.8
    oversample_factor: float = 1.5

    def __post_init__(self):
        super().__post_init__()
        if not 0 <= self.lifetime_threshold <= 1:
            raise ValueError("lifetime_threshold must lie in [0, 1]")
        if self.oversample_factor < 1:
            raise ValueError("oversample_factor must be at least 1")


def side_scores(task: Task, scenario: Scenario, costs: CostMatrix) -> tuple[float, float]:
    """Per-side stand-alone objective of one task: (cloud, edge)."""
    topo = scenario.topology
    row = costs.comm[task.initial_node - 1]
    scores = []
    for kind, cost, gain in ((NodeKind.CLOUD, task.cost_cloud, task.profit_cloud),
                             (NodeKind.EDGE, task.cost_edge, task.profit_edge)):
        reach = min((row[v - 1] for v in topo.ids_of(kind)), default=math.inf)
        scores.append(math.inf if math.isinf(reach) else (cost + scenario.lam * gain) + float(reach))
    return scores[0], scores[1]


def side_preference(task: Task, scenario: Scenario, costs: CostMatrix) -> NodeKind:
    cloud, edge = side_scores(task, scenario, costs)
    return NodeKind.CLOUD if cloud <= edge else NodeKind.EDGE


def merge_closest(rows: np.ndarray, target: int) -> tuple[np.ndarray, int]:
    """Replace the closest pair of rows by their mean until ``target`` rows remain.

    Ties go to the lexicographically smallest index pair; the merged row is
    appended at the end. Returns the rows and the number of merges.
    """
    rows = [np.asarray(r, dtype=float) for r in rows]
    merges = 0
    while len(rows) > target:
        stack = np.array(rows)
        diff = stack[:, None, :] - stack[None, :, :]
        dist = np.einsum("ijk,ijk->ij", diff, diff)
        iu, ju = np.triu_indices(len(rows), k=1)
        best = int(np.argmin(dist[iu, ju]))
        i, j = int(iu[best]), int(ju[best])
        merged = (rows[i] + rows[j]) / 2
        rows = [r for q, r in enumerate(rows) if q not in (i, j)] + [merged]
        merges += 1
    return np.array(rows), merges


def aware_candidates(count: int, scenario: Scenario, costs: CostMatrix, ub: float, rng) -> np.ndarray:
    """``count`` rows; each coordinate uniform in the half of ``[0, ub]`` its task prefers."""
    half = ub / 2
    cloud = np.array([side_preference(t, scenario, costs) is NodeKind.CLOUD for t in scenario.tasks])
    u = rng.random((count, scenario.n_tasks))
    return np.where(cloud, u * half, half + u * half)


def aware_initialize(nsa: int, scenario: Scenario, costs: CostMatrix, ub: float, rng,
                     oversample_factor: float = 1.5) -> np.ndarray:
    """Initial moths: side-aware sampling of ``ceil(1.5 nsa)`` rows, then density merging."""
    rows = aware_candidates(math.ceil(nsa * oversample_factor), scenario, costs, ub, rng)
    rows, _ = merge_closest(rows, nsa)
    # averaging can round a cloud coordinate up onto the boundary
    cloud = np.array([side_preference(t, scenario, costs) is NodeKind.CLOUD for t in scenario.tasks])
    rows[:, cloud] = np.minimum(rows[:, cloud], np.nextafter(ub / 2, 0.0))
    return np.clip(rows, 0.0, ub)


def hierarchical_target(paired_flame, leaders, omega: float) -> np.ndarray:
    """Blend of the paired flame with 2 or 3 leader flames, leaders weighted by ``omega``."""
    paired = np.asarray(paired_flame, dtype=float)
    leaders = [np.asarray(f, dtype=float) for f in leaders]
    total = paired.copy()
    for f in leaders:
        total = total + omega * f
    return total / (1 + len(leaders) * omega)


def lifetime_repair(moth_index: int, flames: np.ndarray, omega: float, rng, ub: float,
                    lifetime_threshold: float = 0.8) -> np.ndarray:
    """Pursuit target for a moth whose own flame was eliminated.

    Draws the lifetime value first, then either K uniform coordinates (fresh
    flame) or one flame index. ``moth_index`` does not influence the result;
    it is kept for tracing.
    """
    k = len(flames)
    tau = rng.random()
    if tau > lifetime_threshold:
        stand_in = random_position(flames.shape[1], ub, rng)
    else:
        stand_in = flames[int(rng.integers(k))]
    return hierarchical_target(stand_in, flames[:min(3, k)], omega)


def mfi_targets(flames: np.ndarray, k: int, n: int, ci: int, mi: int, rng, ub: float,
                lifetime_threshold: float) -> np.ndarray:
    omega = ci / mi
    if k == 1:
        # single survivor: every blend collapses onto it
        return np.repeat(flames[:1], n, axis=0)
    leaders = flames[:min(3, k)]
    targets = np.empty((n, flames.shape[1]))
    for i in range(n):
        if i < k:
            targets[i] = hierarchical_target(flames[i], leaders, omega)
        else:
            targets[i] = lifetime_repair(i + 1, flames, omega, rng, ub, lifetime_threshold)
    return targets


def run_pecco_mfi(scenario: Scenario, params: MfiParams | None = None, costs=None,
                  evaluator: Evaluator | None = None) -> RunReport:
    params = params or MfiParams()
    evaluator = evaluator or Evaluator(scenario, costs, params.ub)
    rng = np.random.default_rng(params.seed)
    moths = aware_initialize(params.nsa, scenario, evaluator.costs, params.ub, rng, params.oversample_factor)

    def targets(flames, k, ci, mi, rng):
        return mfi_targets(flames, k, params.nsa, ci, mi, rng, params.ub, params.lifetime_threshold)

    return run_swarm(evaluator, moths, params, rng, targets, "mfi")
