"""Tasks, scenarios, the seeded synthetic generator, and the scenario file format."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import jsonschema
import numpy as np

from pecco.topology import Link, Node, NodeKind, Topology, validate_topology

@dataclass(frozen=True)
class Task:
    id: int
    wl: float
    cost_cloud: float
    cost_edge: float
    profit_cloud: float
    profit_edge: float
    initial_node: int


@dataclass(frozen=True)
class Scenario:
    topology: Topology
    tasks: tuple[Task, ...]
    lam: float
    name: str = "scenario"
    seed: int = 0
    generator: dict | None = field(default=None, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))

    @property
    def n_tasks(self) -> int:
        return len(self.tasks)


class ScenarioError(ValueError):
    """Raised for malformed or invalid scenario documents and configs."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class GeneratorConfig:
    n_cloud: int = 20
    n_edge: int = 30
    n_tasks: int = 200
    # class means for cloud->cloud, edge->edge, cloud->edge, edge->cloud
    weight_means: tuple[float, float, float, float] = (1.0, 6.0, 2.0, 4.0)
    length_range: tuple[float, float] = (0.5, 3.0)
    capacity_range: tuple[float, float] = (9.0, 15.0)
    idle_load_range: tuple[float, float] = (0.0, 2.0)
    wl_range: tuple[float, float] = (1.0, 5.0)
    cost_cloud_range: tuple[float, float] = (2.0, 8.0)
    cost_edge_range: tuple[float, float] = (1.0, 6.0)
    profit_cloud_range: tuple[float, float] = (20.0, 45.0)
    profit_edge_range: tuple[float, float] = (15.0, 40.0)
    link_density: float = 0.1
    lam: float = -8.0

    def validate(self) -> None:
        if self.n_cloud < 1 or self.n_edge < 1:
            raise ScenarioError("generator needs at least one cloud and one edge node")
        if self.n_tasks < 1:
            raise ScenarioError("generator needs at least one task")
        if len(self.weight_means) != 4 or any(not m > 0 for m in self.weight_means):
            raise ScenarioError("weight_means must be four positive values")
        for name in ("length_range", "capacity_range", "idle_load_range", "wl_range",
                     "cost_cloud_range", "cost_edge_range", "profit_cloud_range", "profit_edge_range"):
            lo, hi = getattr(self, name)
            if not 0 <= lo <= hi:
                raise ScenarioError(f"{name} must satisfy 0 <= min <= max", name)
        if self.wl_range[0] <= 0:
            raise ScenarioError("workloads must be positive", "wl_range")
        if not 0 <= self.link_density <= 1:
            raise ScenarioError("link_density must be a probability", "link_density")
        if not self.lam < 0:
            raise ScenarioError("lambda must be negative", "lam")


def _weight_class(src_kind: NodeKind, dst_kind: NodeKind) -> int:
    if src_kind is dst_kind:
        return 0 if src_kind is NodeKind.CLOUD else 1
    return 2 if src_kind is NodeKind.CLOUD else 3


def generate_scenario(cfg: GeneratorConfig, seed: int, name: str | None = None) -> Scenario:
    """Sample a scenario; a pure function of ``(cfg, seed)``.

    Draw order: node capacities and idle loads, then a random directed cycle
    through all nodes (guarantees reachability), then one Bernoulli trial per
    ordered pair with ``link_density``, then per-link length and class weight
    (uniform on +/-50% of the class mean), then per-task attributes.
    """
    cfg.validate()
    rng = np.random.default_rng(seed)
    n = cfg.n_cloud + cfg.n_edge
    kinds = [NodeKind.CLOUD] * cfg.n_cloud + [NodeKind.EDGE] * cfg.n_edge

    cap_max = rng.uniform(*cfg.capacity_range, size=n)
    idle = rng.uniform(*cfg.idle_load_range, size=n)
    nodes = tuple(
        Node(i + 1, kinds[i], float(min(idle[i], cap_max[i])), float(cap_max[i])) for i in range(n)
    )

    pairs: list[tuple[int, int]] = []
    order = rng.permutation(n)
    for a, b in zip(order, np.roll(order, -1)):
        if a != b:
            pairs.append((int(a), int(b)))
    backbone = set(pairs)
    extra = rng.random((n, n)) < cfg.link_density
    for s in range(n):
        for t in range(n):
            if s != t and extra[s, t] and (s, t) not in backbone:
                pairs.append((s, t))

    lengths = rng.uniform(*cfg.length_range, size=len(pairs))
    factors = rng.uniform(0.5, 1.5, size=len(pairs))
    links = tuple(
        Link(s + 1, t + 1, float(lengths[q]),
             float(cfg.weight_means[_weight_class(kinds[s], kinds[t])] * factors[q]))
        for q, (s, t) in enumerate(pairs)
    )

    k = cfg.n_tasks
    wl = rng.uniform(*cfg.wl_range, size=k)
    cc = rng.uniform(*cfg.cost_cloud_range, size=k)
    ce = rng.uniform(*cfg.cost_edge_range, size=k)
    pc = rng.uniform(*cfg.profit_cloud_range, size=k)
    pe = rng.uniform(*cfg.profit_edge_range, size=k)
    init = rng.integers(1, n + 1, size=k)
    tasks = tuple(
        Task(i + 1, float(wl[i]), float(cc[i]), float(ce[i]), float(pc[i]), float(pe[i]), int(init[i]))
        for i in range(k)
    )

    meta = {"weight_distribution": "uniform[0.5*mean, 1.5*mean]", "config": _config_to_json(cfg)}
    return Scenario(Topology(nodes, links), tasks, float(cfg.lam),
                    name or f"synthetic-{seed}", int(seed), meta)


def _config_to_json(cfg: GeneratorConfig) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(cfg).items()}


SCENARIO_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["name", "seed", "lambda", "nodes", "links", "tasks"],
    "properties": {
        "name": {"type": "string"},
        "seed": {"type": "integer"},
        "lambda": {"type": "number"},
        "generator": {"type": ["object", "null"]},
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "cap_min", "cap_max"],
                "properties": {
                    "id": {"type": "integer"},
                    "kind": {"enum": ["cloud", "edge"]},
                    "cap_min": {"type": "number"},
                    "cap_max": {"type": "number"},
                },
            },
        },
        "links": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst", "length", "unit_weight"],
                "properties": {
                    "src": {"type": "integer"},
                    "dst": {"type": "integer"},
                    "length": {"type": "number"},
                    "unit_weight": {"type": "number"},
                },
            },
        },
        "tasks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "wl", "cost_cloud", "cost_edge", "profit_cloud", "profit_edge",
                             "initial_node"],
                "properties": {
                    "id": {"type": "integer"},
                    "wl": {"type": "number"},
                    "cost_cloud": {"type": "number"},
                    "cost_edge": {"type": "number"},
                    "profit_cloud": {"type": "number"},
                    "profit_edge": {"type": "number"},
                    "initial_node": {"type": "integer"},
                },
            },
        },
    },
}


def scenario_to_dict(s: Scenario) -> dict:
    doc = {
        "name": s.name,
        "seed": s.seed,
        "lambda": s.lam,
        "nodes": [{"id": n.id, "kind": n.kind.value, "cap_min": n.cap_min, "cap_max": n.cap_max}
                  for n in s.topology.nodes],
        "links": [asdict(link) for link in s.topology.links],
        "tasks": [asdict(t) for t in s.tasks],
    }
    if s.generator is not None:
        doc["generator"] = s.generator
    return doc


def save_scenario(s: Scenario) -> bytes:
    # json emits repr() of floats, which round-trips exactly
    return (json.dumps(scenario_to_dict(s), indent=1, allow_nan=False) + "\n").encode("utf-8")


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _schema_error(err: jsonschema.ValidationError) -> ScenarioError:
    parts = list(err.absolute_path)
    if err.validator == "required":
        missing = [r for r in err.validator_value if isinstance(err.instance, dict) and r not in err.instance]
        if missing:
            parts.append(missing[0])
            return ScenarioError(f"missing required field '{missing[0]}'", _path(parts))
    return ScenarioError(err.message, _path(parts) or "<document>")


def scenario_from_dict(doc: Any) -> Scenario:
    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        raise _schema_error(errors[0])
    if not doc["lambda"] < 0:
        raise ScenarioError("lambda must be negative", "lambda")

    nodes = tuple(Node(d["id"], NodeKind(d["kind"]), d["cap_min"], d["cap_max"]) for d in doc["nodes"])
    links = tuple(Link(d["src"], d["dst"], d["length"], d["unit_weight"]) for d in doc["links"])
    topo = Topology(nodes, links)
    problems = validate_topology(topo)
    if problems:
        raise ScenarioError(problems[0], "nodes/links")

    tasks = []
    for i, d in enumerate(doc["tasks"]):
        t = Task(d["id"], d["wl"], d["cost_cloud"], d["cost_edge"], d["profit_cloud"], d["profit_edge"],
                 d["initial_node"])
        if t.id != i + 1:
            raise ScenarioError("task ids must be contiguous from 1", f"tasks[{i}].id")
        if not t.wl > 0:
            raise ScenarioError("workload must be positive", f"tasks[{i}].wl")
        for attr in ("cost_cloud", "cost_edge", "profit_cloud", "profit_edge"):
            if getattr(t, attr) < 0:
                raise ScenarioError("must be nonnegative", f"tasks[{i}].{attr}")
        if not 1 <= t.initial_node <= len(nodes):
            raise ScenarioError("unknown node", f"tasks[{i}].initial_node")
        tasks.append(t)

    return Scenario(topo, tuple(tasks), doc["lambda"], doc["name"], doc["seed"], doc.get("generator"))


def load_scenario(data: bytes | str) -> Scenario:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not a JSON document: {exc}") from exc
    return scenario_from_dict(doc)
