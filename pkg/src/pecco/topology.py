"""Edge-cloud graph: nodes, directed weighted links, all-pairs optimal communication cost."""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class NodeKind(str, enum.Enum):
    CLOUD = "cloud"
    EDGE = "edge"


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    cap_min: float
    cap_max: float


@dataclass(frozen=True)
class Link:
    src: int
    dst: int
    length: float
    unit_weight: float


@dataclass(frozen=True)
class Topology:
    nodes: tuple[Node, ...]
    links: tuple[Link, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id - 1]

    @cached_property
    def cloud_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes if n.kind is NodeKind.CLOUD)

    @cached_property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes if n.kind is NodeKind.EDGE)

    def ids_of(self, kind: NodeKind) -> tuple[int, ...]:
        return self.cloud_ids if kind is NodeKind.CLOUD else self.edge_ids


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Optimal directed communication cost between every ordered node pair.

    ``comm[i, j]`` holds the cost from node ``i + 1`` to node ``j + 1`` (ids are
    1-based, the array is 0-based). Unreachable pairs are ``inf``.
    """

    comm: np.ndarray

    def cost(self, src: int, dst: int) -> float:
        return float(self.comm[src - 1, dst - 1])

    def __eq__(self, other):
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return np.array_equal(self.comm, other.comm)


def validate_topology(topo: Topology) -> list[str]:
    """Return every invariant violation found in ``topo``; empty means usable."""
    violations = []
    ids = [n.id for n in topo.nodes]
    seen = set()
    for pos, n in enumerate(topo.nodes):
        if n.id in seen:
            violations.append(f"duplicate id: node {n.id}")
        seen.add(n.id)
        if n.id != pos + 1:
            violations.append(f"non-contiguous id: node at position {pos + 1} has id {n.id}")
        if n.cap_min < 0:
            violations.append(f"negative cap_min: node {n.id}")
        if n.cap_min > n.cap_max:
            violations.append(f"cap_min > cap_max: node {n.id}")
    kinds = [n.kind for n in topo.nodes]
    # cloud-first numbering
    if NodeKind.EDGE in kinds and NodeKind.CLOUD in kinds[kinds.index(NodeKind.EDGE):]:
        violations.append("node order: cloud node numbered after an edge node")
    if NodeKind.CLOUD not in kinds:
        violations.append("missing side: no cloud node")
    if NodeKind.EDGE not in kinds:
        violations.append("missing side: no edge node")

    id_set = set(ids)
    for q, link in enumerate(topo.links):
        for end in (link.src, link.dst):
            if end not in id_set:
                violations.append(f"dangling endpoint: link {q} ({link.src}->{link.dst}) references node {end}")
        if not link.length >= 0 or math.isinf(link.length):
            violations.append(f"negative length: link {q} ({link.src}->{link.dst})")
        if not link.unit_weight >= 0 or math.isinf(link.unit_weight):
            violations.append(f"negative weight: link {q} ({link.src}->{link.dst})")
    return violations


def link_cost(link: Link) -> float:
    return link.length * link.unit_weight


def _adjacency(topo: Topology) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(topo.n_nodes)]
    for link in topo.links:
        if link.src == link.dst:
            continue
        adj[link.src - 1].append((link.dst - 1, link_cost(link)))
    return adj


def _single_source(adj: list[list[tuple[int, float]]], source: int) -> list[float]:
    dist = [math.inf] * len(adj)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, c in adj[u]:
            nd = d + c
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def all_pairs_optimal_cost(topo: Topology) -> CostMatrix:
    """Dijkstra from every node; path costs accumulate source to destination."""
    adj = _adjacency(topo)
    comm = np.array([_single_source(adj, s) for s in range(topo.n_nodes)], dtype=float)
    comm.setflags(write=False)
    return CostMatrix(comm)
