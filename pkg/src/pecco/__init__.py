"""Profit and cost oriented edge-cloud computation offloading with an improved moth-flame optimizer."""

from pecco.baselines import exhaustive_optimum, run_greedy, run_random_search
from pecco.mfi import MfiParams, aware_initialize, run_pecco_mfi, side_preference
from pecco.mfo import MfoParams, RunReport, flame_count, run_mfo, spiral_step
from pecco.objective import Evaluator, decode, evaluate, metrics
from pecco.topology import CostMatrix, Link, Node, NodeKind, Topology, all_pairs_optimal_cost
from pecco.workload import GeneratorConfig, Scenario, Task, generate_scenario, load_scenario, save_scenario

__all__ = [
    "CostMatrix", "Evaluator", "GeneratorConfig", "Link", "MfiParams", "MfoParams", "Node", "NodeKind",
    "RunReport", "Scenario", "Task", "Topology", "all_pairs_optimal_cost", "aware_initialize", "decode",
    "evaluate", "exhaustive_optimum", "flame_count", "generate_scenario", "load_scenario", "metrics",
    "run_greedy", "run_mfo", "run_pecco_mfi", "run_random_search", "save_scenario", "side_preference",
    "spiral_step",
]
