import hypothesis
import numpy as np
import pytest

from pecco.topology import Link, Node, NodeKind, Topology
from pecco.workload import GeneratorConfig, Scenario, Task, generate_scenario

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def default_scenario():
    return generate_scenario(GeneratorConfig(), 0)


def two_node_topology():
    return Topology(
        (Node(1, NodeKind.CLOUD, 0.0, 10.0), Node(2, NodeKind.EDGE, 0.0, 10.0)),
        (Link(1, 2, 2.0, 2.0),),
    )


def single_task_scenario(edge_dominates=True):
    """One task on the edge node; the edge side is cheaper and more profitable."""
    topo = Topology(
        (Node(1, NodeKind.CLOUD, 0.0, 10.0), Node(2, NodeKind.EDGE, 0.0, 10.0)),
        (Link(1, 2, 1.0, 2.0), Link(2, 1, 1.0, 4.0)),
    )
    if edge_dominates:
        task = Task(1, 2.0, 5.0, 1.0, 3.0, 9.0, 2)
    else:
        task = Task(1, 2.0, 1.0, 5.0, 9.0, 3.0, 1)
    return Scenario(topo, (task,), -8.0, "single")


def random_tiny_scenario(rng: np.random.Generator, max_tasks=8, max_nodes=6, connected=False) -> Scenario:
    """Small scenario with tight capacities; links may leave pairs unreachable."""
    n_cloud = int(rng.integers(1, max_nodes))
    n_edge = int(rng.integers(1, max_nodes - n_cloud + 1))
    n = n_cloud + n_edge
    nodes = tuple(
        Node(i + 1, NodeKind.CLOUD if i < n_cloud else NodeKind.EDGE,
             float(rng.uniform(0, 1)), float(rng.uniform(2, 7)))
        for i in range(n)
    )
    links = []
    for s in range(1, n + 1):
        for t in range(1, n + 1):
            if s != t and (rng.random() < 0.5 or (connected and t == s % n + 1)):
                links.append(Link(s, t, float(rng.uniform(0, 3)), float(rng.uniform(0.5, 6))))
    k = int(rng.integers(1, max_tasks + 1))
    tasks = tuple(
        Task(i + 1, float(rng.uniform(0.5, 3)), float(rng.uniform(0, 8)), float(rng.uniform(0, 8)),
             float(rng.uniform(0, 40)), float(rng.uniform(0, 40)), int(rng.integers(1, n + 1)))
        for i in range(k)
    )
    return Scenario(Topology(nodes, tuple(links)), tasks, float(-rng.uniform(0.5, 10)), "tiny")


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
