"""Decoding positions into capacity-feasible allocations and scoring them.

A position holds one value per task in ``[0, ub]``. Values below ``ub / 2``
send the task to the cloud side, the rest to the edge side. Within the side,
the task goes to the node with the cheapest communication cost from its
initial node that still has room for it; otherwise it stays unallocated.
Unallocated tasks contribute neither cost nor profit.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from pecco.topology import CostMatrix, NodeKind, all_pairs_optimal_cost
from pecco.workload import Scenario

UNALLOCATED = 0


@dataclass(frozen=True)
class AllocationOutcome:
    assignment: tuple[int, ...]  # node id per task, UNALLOCATED (0) when declined
    node_load: tuple[float, ...]  # per node, starting from cap_min

    @property
    def allocated_count(self) -> int:
        return sum(1 for a in self.assignment if a != UNALLOCATED)


@dataclass(frozen=True)
class ObjectiveBreakdown:
    comm: float
    comp: float
    profit: float
    objective: float


@dataclass(frozen=True)
class MetricsReport:
    objective: float
    profit: float
    cost: float
    profit_cost_ratio: float
    allocated_count: float
    profit_per_allocation: float
    cost_per_allocation: float
    utilization_percent: float
    profit_per_utilization: float
    cost_per_utilization: float
    # names of ratio fields whose denominator was zero (reported as 0)
    degenerate: tuple[str, ...] = ()

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "degenerate"}


METRIC_FIELDS = tuple(f.name for f in fields(MetricsReport) if f.name != "degenerate")


def side_of(value: float, ub: float) -> NodeKind:
    return NodeKind.CLOUD if value < ub / 2 else NodeKind.EDGE


def objective_value(comm: float, comp: float, profit: float, lam: float) -> float:
    return (comm + comp) + lam * profit


class Evaluator:
    """Precomputed decode tables for one scenario; evaluation is then a pure function of the position."""

    def __init__(self, scenario: Scenario, costs: CostMatrix | None = None, ub: float = 1.0):
        self.scenario = scenario
        self.costs = costs if costs is not None else all_pairs_optimal_cost(scenario.topology)
        self.ub = float(ub)
        self.half = self.ub / 2
        topo = scenario.topology
        comm = self.costs.comm
        self.n_tasks = scenario.n_tasks
        self.lam = scenario.lam
        self.is_cloud = [n.kind is NodeKind.CLOUD for n in topo.nodes]
        self.cap_min = [float(n.cap_min) for n in topo.nodes]
        self.cap_max = [float(n.cap_max) for n in topo.nodes]

        # candidate node indices per (initial node, side): ascending (comm, id), finite only
        by_side = {}
        for kind in (NodeKind.CLOUD, NodeKind.EDGE):
            idx = [i - 1 for i in topo.ids_of(kind)]
            table = []
            for src in range(topo.n_nodes):
                ranked = sorted((comm[src, v], v) for v in idx if np.isfinite(comm[src, v]))
                table.append(tuple(v for _, v in ranked))
            by_side[kind] = table

        self._tasks = []
        for t in scenario.tasks:
            src = t.initial_node - 1
            self._tasks.append((
                float(t.wl),
                by_side[NodeKind.CLOUD][src],
                by_side[NodeKind.EDGE][src],
                comm[src].tolist(),
                (float(t.cost_edge), float(t.cost_cloud)),
                (float(t.profit_edge), float(t.profit_cloud)),
            ))

    def _check(self, position) -> np.ndarray:
        pos = np.asarray(position, dtype=float)
        if pos.shape != (self.n_tasks,):
            raise ValueError(f"position has shape {pos.shape}, expected ({self.n_tasks},)")
        return pos

    def _run(self, position):
        pos = self._check(position).tolist()
        half = self.half
        load = list(self.cap_min)
        cap = self.cap_max
        assign = [UNALLOCATED] * self.n_tasks
        comm = comp = profit = 0.0
        for k, (wl, cloud, edge, comm_row, cost, gain) in enumerate(self._tasks):
            for v in (cloud if pos[k] < half else edge):
                if load[v] + wl <= cap[v]:
                    load[v] += wl
                    assign[k] = v + 1
                    on_cloud = self.is_cloud[v]
                    comm += comm_row[v]
                    comp += cost[on_cloud]
                    profit += gain[on_cloud]
                    break
        return AllocationOutcome(tuple(assign), tuple(load)), comm, comp, profit

    def decode(self, position) -> AllocationOutcome:
        return self._run(position)[0]

    def evaluate(self, position) -> ObjectiveBreakdown:
        _, comm, comp, profit = self._run(position)
        return ObjectiveBreakdown(comm, comp, profit, objective_value(comm, comp, profit, self.lam))

    def decode_and_evaluate(self, position) -> tuple[AllocationOutcome, ObjectiveBreakdown]:
        outcome, comm, comp, profit = self._run(position)
        return outcome, ObjectiveBreakdown(comm, comp, profit, objective_value(comm, comp, profit, self.lam))

    def objective(self, position) -> float:
        _, comm, comp, profit = self._run(position)
        return objective_value(comm, comp, profit, self.lam)


def decode(position, scenario: Scenario, costs: CostMatrix, ub: float = 1.0) -> AllocationOutcome:
    return Evaluator(scenario, costs, ub).decode(position)


def communication_cost(outcome: AllocationOutcome, scenario: Scenario, costs: CostMatrix) -> float:
    total = 0.0
    for task, node in zip(scenario.tasks, outcome.assignment):
        if node != UNALLOCATED:
            total += float(costs.comm[task.initial_node - 1, node - 1])
    return total


def computation_cost(outcome: AllocationOutcome, scenario: Scenario) -> float:
    topo = scenario.topology
    total = 0.0
    for task, node in zip(scenario.tasks, outcome.assignment):
        if node != UNALLOCATED:
            total += task.cost_cloud if topo.node(node).kind is NodeKind.CLOUD else task.cost_edge
    return total


def profit(outcome: AllocationOutcome, scenario: Scenario) -> float:
    topo = scenario.topology
    total = 0.0
    for task, node in zip(scenario.tasks, outcome.assignment):
        if node != UNALLOCATED:
            total += task.profit_cloud if topo.node(node).kind is NodeKind.CLOUD else task.profit_edge
    return total


def breakdown(outcome: AllocationOutcome, scenario: Scenario, costs: CostMatrix) -> ObjectiveBreakdown:
    comm = communication_cost(outcome, scenario, costs)
    comp = computation_cost(outcome, scenario)
    gain = profit(outcome, scenario)
    return ObjectiveBreakdown(comm, comp, gain, objective_value(comm, comp, gain, scenario.lam))


def evaluate(position, scenario: Scenario, costs: CostMatrix, ub: float = 1.0) -> ObjectiveBreakdown:
    return Evaluator(scenario, costs, ub).evaluate(position)


def utilization_percent(outcome: AllocationOutcome, scenario: Scenario) -> float:
    ratios = []
    for node, load in zip(scenario.topology.nodes, outcome.node_load):
        if node.cap_max > 0:
            ratios.append(load / node.cap_max)
        else:
            ratios.append(0.0 if load == 0 else float("inf"))
    return 100.0 * sum(ratios) / len(ratios)


def is_overloaded(outcome: AllocationOutcome, scenario: Scenario) -> bool:
    return any(load > n.cap_max for n, load in zip(scenario.topology.nodes, outcome.node_load))


def _ratio(num: float, den: float, name: str, degenerate: list[str]) -> float:
    if den == 0:
        degenerate.append(name)
        return 0.0
    return num / den


def compute_metrics(objective: float, profit: float, cost: float, allocated_count: float,
                    utilization: float) -> MetricsReport:
    """Ratio metrics from aggregate totals; zero denominators give 0 and are listed in ``degenerate``."""
    bad: list[str] = []
    return MetricsReport(
        objective=objective,
        profit=profit,
        cost=cost,
        profit_cost_ratio=_ratio(profit, cost, "profit_cost_ratio", bad),
        allocated_count=allocated_count,
        profit_per_allocation=_ratio(profit, allocated_count, "profit_per_allocation", bad),
        cost_per_allocation=_ratio(cost, allocated_count, "cost_per_allocation", bad),
        utilization_percent=utilization,
        profit_per_utilization=_ratio(profit, utilization, "profit_per_utilization", bad),
        cost_per_utilization=_ratio(cost, utilization, "cost_per_utilization", bad),
        degenerate=tuple(bad),
    )


def metrics(outcome: AllocationOutcome, result: ObjectiveBreakdown, scenario: Scenario) -> MetricsReport:
    return compute_metrics(result.objective, result.profit, result.comm + result.comp,
                           outcome.allocated_count, utilization_percent(outcome, scenario))
