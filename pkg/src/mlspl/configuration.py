"""Product configurations: workflow DAG, objectives, allocations, validation.

Validation composes the feature-model, card-registry, and resource predicates
into one deterministic report; findings are sorted by (severity, code,
subject) and the report is ok iff no error-severity finding exists.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .errors import ConfigError, CycleError
from .feature_model import FeatureKind, FeatureModel, Selection, is_valid_configuration
from .model_cards import CardRegistry, ResourceAllocation, check_resource_fit, normalize_metric
from .replacement import ComponentReference


@dataclass(frozen=True)
class ComponentGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        known = set(self.nodes)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ConfigError(f"edge ({u}, {v}) references undeclared node")


@dataclass(frozen=True)
class ExecutionConstraint:
    kind: str  # ordering | timing
    payload: Mapping


@dataclass(frozen=True)
class QualityObjective:
    direction: str  # maximize | minimize
    target: float


@dataclass(frozen=True)
class ProductConfiguration:
    configuration_id: str
    feature_binding: Mapping[str, ComponentReference]
    component_graph: ComponentGraph
    execution_constraints: tuple[ExecutionConstraint, ...] = ()
    quality_objectives: Mapping[str, QualityObjective] = field(default_factory=dict)
    resource_allocations: Mapping[str, ResourceAllocation] = field(default_factory=dict)
    monitoring_configuration: Mapping[str, str] = field(default_factory=dict)
    replacement_triggers: tuple[Mapping, ...] = ()
    quality_negotiation: str = ""
    performance_optimization: str = ""
    functional_tests: tuple[Mapping, ...] = ()
    performance_benchmarks: tuple[Mapping, ...] = ()
    quality_assertions: tuple[Mapping, ...] = ()
    compliance_checks: tuple[Mapping, ...] = ()
    auxiliary_components: tuple[str, ...] = ()
    acknowledge_caveats: tuple[str, ...] = ()


def config_from_dict(doc: Mapping) -> ProductConfiguration:
    ws = doc.get("workflow_specification", {})
    graph = ws.get("component_graph", {"nodes": [], "edges": []})
    ap = doc.get("adaptation_policies", {})
    vr = doc.get("validation_requirements", {})
    monitoring = ap.get("monitoring_configuration", {})
    if isinstance(monitoring, str):
        monitoring = {}
    return ProductConfiguration(
        configuration_id=doc["configuration_id"],
        feature_binding={f: ComponentReference.from_dict(b)
                         for f, b in doc.get("feature_binding", {}).items()},
        component_graph=ComponentGraph(
            nodes=tuple(graph.get("nodes", [])),
            edges=tuple((u, v) for u, v in graph.get("edges", []))),
        execution_constraints=tuple(
            ExecutionConstraint(c["kind"], c.get("payload", {}))
            for c in ws.get("execution_constraints", [])),
        quality_objectives={
            k: QualityObjective(v["direction"], float(v["target"]))
            for k, v in ws.get("quality_objectives", {}).items()},
        resource_allocations={
            k: ResourceAllocation(int(v["cpu_cores"]), float(v["ram_gb"]),
                                  bool(v.get("gpu", False)))
            for k, v in ws.get("resource_allocations", {}).items()},
        monitoring_configuration=dict(monitoring),
        replacement_triggers=tuple(ap.get("replacement_triggers", [])),
        quality_negotiation=ap.get("quality_negotiation", ""),
        performance_optimization=ap.get("performance_optimization", ""),
        functional_tests=tuple(vr.get("functional_tests", [])),
        performance_benchmarks=tuple(vr.get("performance_benchmarks", [])),
        quality_assertions=tuple(vr.get("quality_assertions", [])),
        compliance_checks=tuple(vr.get("compliance_checks", [])),
        auxiliary_components=tuple(doc.get("auxiliary_components", [])),
        acknowledge_caveats=tuple(doc.get("acknowledge_caveats", [])),
    )


def config_to_dict(cfg: ProductConfiguration) -> dict:
    return {
        "configuration_id": cfg.configuration_id,
        "feature_binding": {f: b.to_dict() for f, b in cfg.feature_binding.items()},
        "workflow_specification": {
            "component_graph": {
                "nodes": list(cfg.component_graph.nodes),
                "edges": [list(e) for e in cfg.component_graph.edges],
            },
            "execution_constraints": [
                {"kind": c.kind, "payload": dict(c.payload)}
                for c in cfg.execution_constraints],
            "quality_objectives": {
                k: {"direction": o.direction, "target": o.target}
                for k, o in cfg.quality_objectives.items()},
            "resource_allocations": {
                k: {"cpu_cores": a.cpu_cores, "ram_gb": a.ram_gb, "gpu": a.gpu}
                for k, a in cfg.resource_allocations.items()},
        },
        "adaptation_policies": {
            "monitoring_configuration": dict(cfg.monitoring_configuration),
            "replacement_triggers": [dict(t) for t in cfg.replacement_triggers],
            "quality_negotiation": cfg.quality_negotiation,
            "performance_optimization": cfg.performance_optimization,
        },
        "validation_requirements": {
            "functional_tests": [dict(t) for t in cfg.functional_tests],
            "performance_benchmarks": [dict(t) for t in cfg.performance_benchmarks],
            "quality_assertions": [dict(t) for t in cfg.quality_assertions],
            "compliance_checks": [dict(t) for t in cfg.compliance_checks],
        },
        "auxiliary_components": list(cfg.auxiliary_components),
        "acknowledge_caveats": list(cfg.acknowledge_caveats),
    }


def load_config(path: Path) -> ProductConfiguration:
    return config_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# --- operations ------------------------------------------------------------------

def topological_order(graph: ComponentGraph,
                      extra_edges: Sequence[tuple[str, str]] = ()) -> list[str]:
    """Kahn's algorithm with lexicographic tie-break; CycleError names a cycle."""
    nodes = sorted(graph.nodes)
    succ: dict[str, set[str]] = {n: set() for n in nodes}
    indeg: dict[str, int] = {n: 0 for n in nodes}
    for u, v in list(graph.edges) + list(extra_edges):
        if v not in succ[u]:
            succ[u].add(v)
            indeg[v] += 1
    ready = sorted(n for n in nodes if indeg[n] == 0)
    order: list[str] = []
    while ready:
        n = ready.pop(0)
        order.append(n)
        inserted = False
        for m in sorted(succ[n]):
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
                inserted = True
        if inserted:
            ready.sort()
    if len(order) != len(nodes):
        remaining = {n for n in nodes if n not in order}
        raise CycleError(_find_cycle(remaining, succ))
    return order


def _find_cycle(remaining: set[str], succ: Mapping[str, set[str]]) -> list[str]:
    # strip nodes that cannot lie on a cycle (no successor still remaining)
    remaining = set(remaining)
    changed = True
    while changed:
        dead = {n for n in remaining if not (succ[n] & remaining)}
        remaining -= dead
        changed = bool(dead)
    start = sorted(remaining)[0]
    path, seen = [], {}
    node = start
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        nxt = sorted(m for m in succ[node] if m in remaining)
        node = nxt[0]
    return path[seen[node]:]


@dataclass(frozen=True)
class Finding:
    severity: str  # error | warning
    code: str
    message: str
    subject: str

    def to_dict(self) -> dict:
        return {"severity": self.severity, "code": self.code,
                "message": self.message, "subject": self.subject}


@dataclass(frozen=True)
class ConfigReport:
    ok: bool
    findings: tuple[Finding, ...]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "findings": [f.to_dict() for f in self.findings]}


def validate_product_configuration(cfg: ProductConfiguration, model: FeatureModel,
                                   sel: Selection,
                                   registry: CardRegistry) -> ConfigReport:
    if not is_valid_configuration(model, sel):
        raise ConfigError("selection is not a valid configuration of the model")
    findings: list[Finding] = []

    def err(code, message, subject):
        findings.append(Finding("error", code, message, subject))

    def warn(code, message, subject):
        findings.append(Finding("warning", code, message, subject))

    features_by_id = {f.id: f for f in model.features}
    bound_components = {b.id for b in cfg.feature_binding.values()}

    for fid in cfg.feature_binding:
        if fid not in sel.chosen:
            err("BINDING_NOT_SELECTED",
                f"feature {fid} is bound but not selected", fid)

    for fid in sorted(sel.chosen):
        f = features_by_id[fid]
        if f.kind is FeatureKind.ML_BASED and fid not in cfg.feature_binding:
            err("UNBOUND_ML_FEATURE", f"ml feature {fid} has no component binding", fid)

    cards = {}
    for fid, binding in sorted(cfg.feature_binding.items()):
        if binding.type.value == "ml_model":
            card = registry.latest(binding.id)
            if card is None:
                err("UNKNOWN_CARD", f"no card registered for {binding.id}", binding.id)
            else:
                cards[binding.id] = card

    declared = bound_components | set(cfg.auxiliary_components)
    for node in cfg.component_graph.nodes:
        if node in declared:
            continue
        if node in features_by_id and features_by_id[node].kind is FeatureKind.CLASSIC:
            warn("UNBOUND_CLASSIC_FEATURE",
                 f"graph names classic feature {node} without a binding", node)
        else:
            err("UNDECLARED_NODE",
                f"graph node {node} is neither bound nor declared auxiliary", node)

    ordering_edges = [(c.payload["before"], c.payload["after"])
                      for c in cfg.execution_constraints
                      if c.kind == "ordering" and "before" in c.payload]
    try:
        topological_order(cfg.component_graph, ordering_edges)
    except CycleError as exc:
        err("GRAPH_CYCLE", str(exc), ",".join(exc.nodes))
    except ConfigError as exc:
        err("GRAPH_EDGE", str(exc), cfg.configuration_id)

    accuracy_targets = [o.target for name, o in cfg.quality_objectives.items()
                        if name.lower() == "accuracy" and o.direction == "maximize"]
    for component_id, card in sorted(cards.items()):
        alloc = cfg.resource_allocations.get(component_id)
        if alloc is not None:
            fit = check_resource_fit(card, alloc)
            for violation in fit.violations:
                kind = violation.split(":", 1)[0].upper()
                err(f"RESOURCE_{kind}", violation, component_id)
        acc = card.normalized_accuracy()
        for target in accuracy_targets:
            if acc is not None and target > acc:
                err("QUALITY_UNREACHABLE",
                    f"accuracy objective {target} exceeds card accuracy {acc}",
                    component_id)
        if component_id not in cfg.monitoring_configuration:
            warn("MISSING_MONITOR_REF",
                 f"ml component {component_id} has no monitor reference", component_id)

    severity_rank = {"error": 0, "warning": 1}
    findings.sort(key=lambda f: (severity_rank[f.severity], f.code, f.subject))
    ok = not any(f.severity == "error" for f in findings)
    return ConfigReport(ok=ok, findings=tuple(findings))


@dataclass(frozen=True)
class ResourceTotals:
    cpu_cores: int
    ram_gb: float
    gpu_count: int

    def to_dict(self) -> dict:
        return {"cpu_cores": self.cpu_cores, "ram_gb": self.ram_gb,
                "gpu_count": self.gpu_count}


def aggregate_resources(cfg: ProductConfiguration) -> ResourceTotals:
    cpu = sum(a.cpu_cores for a in cfg.resource_allocations.values())
    ram = sum(a.ram_gb for a in cfg.resource_allocations.values())
    gpus = sum(1 for a in cfg.resource_allocations.values() if a.gpu)
    return ResourceTotals(cpu, ram, gpus)
