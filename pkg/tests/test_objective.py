import itertools
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_allocation, brute_objective, path_dp
from pecco.objective import (
    UNALLOCATED,
    AllocationOutcome,
    Evaluator,
    ObjectiveBreakdown,
    communication_cost,
    compute_metrics,
    computation_cost,
    decode,
    evaluate,
    metrics,
    objective_value,
    profit,
    side_of,
)
from pecco.topology import Link, Node, NodeKind, Topology, all_pairs_optimal_cost
from pecco.workload import Scenario, Task

from conftest import random_tiny_scenario

seeds = st.integers(0, 2**32 - 1)


def line_scenario(tasks, lam=-8.0):
    """Cloud nodes 1, 2 and edge node 3; 1->2 costs 2, 2->3 costs 5, 1->3 costs 4."""
    nodes = (Node(1, NodeKind.CLOUD, 0.0, 10.0), Node(2, NodeKind.CLOUD, 0.0, 10.0),
             Node(3, NodeKind.EDGE, 0.0, 10.0))
    links = (Link(1, 2, 1.0, 2.0), Link(2, 3, 1.0, 5.0), Link(1, 3, 2.0, 2.0), Link(3, 1, 1.0, 4.0),
             Link(2, 1, 1.0, 1.0))
    return Scenario(Topology(nodes, links), tuple(tasks), lam)


@pytest.mark.parametrize("value, side", [(0.3, NodeKind.CLOUD), (0.7, NodeKind.EDGE), (0.5, NodeKind.EDGE),
                                         (0.0, NodeKind.CLOUD), (1.0, NodeKind.EDGE)])
def test_side_boundaries(value, side):
    assert side_of(value, 1.0) is side


def test_task_stays_on_cheapest_node():
    s = line_scenario([Task(1, 1.0, 2.0, 9.0, 5.0, 1.0, 2)])
    costs = all_pairs_optimal_cost(s.topology)
    out = decode([0.0], s, costs)
    assert out.assignment == (2,)
    assert communication_cost(out, s, costs) == 0.0


def test_capacity_exhaustion_leaves_task_unallocated():
    nodes = (Node(1, NodeKind.CLOUD, 0.0, 4.0), Node(2, NodeKind.EDGE, 0.0, 10.0))
    s = Scenario(Topology(nodes, (Link(1, 2, 1.0, 1.0), Link(2, 1, 1.0, 1.0))),
                 (Task(1, 3.0, 1, 1, 1, 1, 1), Task(2, 3.0, 1, 1, 1, 1, 1)), -1.0)
    out = decode([0.1, 0.1], s, all_pairs_optimal_cost(s.topology))
    assert out.assignment == (1, UNALLOCATED)
    assert out.node_load == (3.0, 0.0)
    assert out.allocated_count == 1


def test_full_node_falls_through_to_next_cheapest():
    s = line_scenario([Task(1, 6.0, 1, 1, 1, 1, 1), Task(2, 6.0, 1, 1, 1, 1, 1)])
    out = decode([0.1, 0.1], s, all_pairs_optimal_cost(s.topology))
    assert out.assignment == (1, 2)


def test_cap_min_counts_as_load():
    nodes = (Node(1, NodeKind.CLOUD, 3.0, 4.0), Node(2, NodeKind.EDGE, 0.0, 10.0))
    s = Scenario(Topology(nodes, (Link(1, 2, 1.0, 1.0),)), (Task(1, 2.0, 1, 1, 1, 1, 1),), -1.0)
    assert decode([0.1], s, all_pairs_optimal_cost(s.topology)).assignment == (UNALLOCATED,)


def test_unreachable_side_is_skipped():
    nodes = (Node(1, NodeKind.CLOUD, 0.0, 4.0), Node(2, NodeKind.EDGE, 0.0, 10.0))
    s = Scenario(Topology(nodes, ()), (Task(1, 1.0, 1, 1, 1, 1, 1),), -1.0)
    costs = all_pairs_optimal_cost(s.topology)
    assert decode([0.9], s, costs).assignment == (UNALLOCATED,)
    assert decode([0.1], s, costs).assignment == (1,)


def test_ties_go_to_lower_node_id():
    nodes = (Node(1, NodeKind.CLOUD, 0, 9), Node(2, NodeKind.EDGE, 0, 9), Node(3, NodeKind.EDGE, 0, 9))
    links = (Link(1, 3, 1.0, 2.0), Link(1, 2, 2.0, 1.0))
    s = Scenario(Topology(nodes, links), (Task(1, 1.0, 1, 1, 1, 1, 1),), -1.0)
    assert decode([0.8], s, all_pairs_optimal_cost(s.topology)).assignment == (2,)


def test_dimension_mismatch():
    s = line_scenario([Task(1, 1.0, 1, 1, 1, 1, 1)])
    with pytest.raises(ValueError):
        decode([0.1, 0.2], s, all_pairs_optimal_cost(s.topology))


def test_communication_cost_examples():
    tasks = [Task(1, 1.0, 1, 1, 1, 1, 1), Task(2, 1.0, 1, 1, 1, 1, 2), Task(3, 1.0, 1, 1, 1, 1, 2)]
    s = line_scenario(tasks)
    costs = all_pairs_optimal_cost(s.topology)
    assert communication_cost(AllocationOutcome((1, 2, 2), (0, 0, 0)), s, costs) == 0.0
    # migrations 1->2 (2), 2->2 (0), 2->3 (5)
    assert communication_cost(AllocationOutcome((2, 2, 3), (0, 0, 0)), s, costs) == 7.0
    assert communication_cost(AllocationOutcome((3, UNALLOCATED, UNALLOCATED), (0, 0, 0)), s, costs) == 4.0


def test_computation_cost_and_profit_examples():
    s = line_scenario([Task(1, 1.0, 2.0, 9.0, 3.0, 10.0, 1), Task(2, 1.0, 1.0, 1.0, 4.0, 1.0, 1)])
    assert computation_cost(AllocationOutcome((1, UNALLOCATED), (0, 0, 0)), s) == 2.0
    assert computation_cost(AllocationOutcome((3, UNALLOCATED), (0, 0, 0)), s) == 9.0
    assert computation_cost(AllocationOutcome((UNALLOCATED, UNALLOCATED), (0, 0, 0)), s) == 0.0
    assert profit(AllocationOutcome((3, UNALLOCATED), (0, 0, 0)), s) == 10.0
    assert profit(AllocationOutcome((1, 2), (0, 0, 0)), s) == 7.0
    assert profit(AllocationOutcome((UNALLOCATED, UNALLOCATED), (0, 0, 0)), s) == 0.0


def test_objective_arithmetic():
    assert objective_value(3.0, 2.0, 10.0, -8.0) == -75.0
    assert objective_value(3.0, 2.0, 0.0, -8.0) == 5.0


def test_evaluate_known_allocation():
    # task 1 from node 1 to edge node 3 (comm 4, cost 9, profit 10)
    s = line_scenario([Task(1, 1.0, 2.0, 9.0, 3.0, 10.0, 1)])
    result = evaluate([0.9], s, all_pairs_optimal_cost(s.topology))
    assert result == ObjectiveBreakdown(4.0, 9.0, 10.0, 13.0 - 80.0)


@given(seeds)
def test_evaluate_matches_brute_force_on_every_side_pattern(seed):
    s = random_tiny_scenario(np.random.default_rng(seed))
    costs = all_pairs_optimal_cost(s.topology)
    comm = path_dp(s.topology.n_nodes, s.topology.links)
    ev = Evaluator(s, costs)
    for pattern in itertools.product(("cloud", "edge"), repeat=s.n_tasks):
        pos = [0.2 if p == "cloud" else 0.6 for p in pattern]
        assignment, load = brute_allocation(s, comm, pattern)
        expected = brute_objective(s, comm, assignment)
        outcome, got = ev.decode_and_evaluate(pos)
        assert outcome.assignment == tuple(UNALLOCATED if a is None else a for a in assignment)
        np.testing.assert_allclose([got.comm, got.comp, got.profit, got.objective], expected, rtol=1e-9, atol=1e-9)


@given(seeds, st.lists(st.floats(0, 1), min_size=8, max_size=8))
def test_decoder_never_overloads(seed, values):
    s = random_tiny_scenario(np.random.default_rng(seed))
    out = decode(values[:s.n_tasks], s, all_pairs_optimal_cost(s.topology))
    for node, load in zip(s.topology.nodes, out.node_load):
        assert load <= node.cap_max


@given(seeds, st.lists(st.floats(0, 1), min_size=8, max_size=8))
def test_decode_is_deterministic(seed, values):
    s = random_tiny_scenario(np.random.default_rng(seed))
    costs = all_pairs_optimal_cost(s.topology)
    pos = values[:s.n_tasks]
    assert decode(pos, s, costs) == decode(pos, s, costs)
    assert evaluate(pos, s, costs) == Evaluator(s, costs).evaluate(np.array(pos))


@given(seeds, st.lists(st.floats(0, 1), min_size=8, max_size=8), st.floats(0, 1))
def test_moving_within_a_half_keeps_the_outcome(seed, values, u):
    s = random_tiny_scenario(np.random.default_rng(seed))
    costs = all_pairs_optimal_cost(s.topology)
    pos = np.array(values[:s.n_tasks])
    moved = pos.copy()
    moved[0] = u * 0.4999 if pos[0] < 0.5 else 0.5 + u * 0.5
    assert decode(pos, s, costs) == decode(moved, s, costs)


@given(seeds, st.lists(st.floats(0, 1), min_size=8, max_size=8), st.floats(-20, -0.1))
def test_objective_is_linear_in_lambda(seed, values, lam2):
    s1 = random_tiny_scenario(np.random.default_rng(seed))
    s2 = replace(s1, lam=lam2)
    costs = all_pairs_optimal_cost(s1.topology)
    pos = values[:s1.n_tasks]
    a, b = evaluate(pos, s1, costs), evaluate(pos, s2, costs)
    assert a.profit == b.profit
    assert a.objective - b.objective == pytest.approx((s1.lam - lam2) * a.profit, rel=1e-9, abs=1e-9)


@given(seeds)
def test_minimum_over_patterns_matches_brute_force_minimum(seed):
    s = random_tiny_scenario(np.random.default_rng(seed))
    costs = all_pairs_optimal_cost(s.topology)
    comm = path_dp(s.topology.n_nodes, s.topology.links)
    ev = Evaluator(s, costs)
    got = min(ev.objective([0.25 if c else 0.75 for c in p]) for p in itertools.product((1, 0), repeat=s.n_tasks))
    ref = min(brute_objective(s, comm, brute_allocation(s, comm, p)[0])[3]
              for p in itertools.product(("cloud", "edge"), repeat=s.n_tasks))
    assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_metrics_reference_cells():
    m = compute_metrics(-48069.48, 6229.31, 1765.0, 179.3, 95.0)
    assert f"{m.profit_cost_ratio:.2f}" == "3.53"
    assert f"{m.cost_per_allocation:.2f}" == "9.84"


def test_metrics_zero_allocations_are_zero_not_errors():
    m = compute_metrics(0.0, 0.0, 0.0, 0, 0.0)
    assert m.profit_cost_ratio == m.profit_per_allocation == m.cost_per_allocation == 0.0
    assert m.profit_per_utilization == m.cost_per_utilization == 0.0
    assert set(m.degenerate) == {"profit_cost_ratio", "profit_per_allocation", "cost_per_allocation",
                                 "profit_per_utilization", "cost_per_utilization"}


def test_metrics_from_outcome():
    s = line_scenario([Task(1, 5.0, 2.0, 9.0, 3.0, 10.0, 1)])
    costs = all_pairs_optimal_cost(s.topology)
    out = decode([0.9], s, costs)
    m = metrics(out, evaluate([0.9], s, costs), s)
    assert m.allocated_count == 1
    assert m.cost == 13.0 and m.profit == 10.0
    assert m.utilization_percent == pytest.approx(100 * (0 + 0 + 0.5) / 3)
    assert m.profit_per_utilization == pytest.approx(10.0 / m.utilization_percent)
    assert m.profit_cost_ratio == pytest.approx(10 / 13)
