"""Product derivation and the ML-aware validation suite.

Manifests are canonical JSON with content-hash provenance: identical inputs
always produce byte-identical output (pass a fixed `now` for a pinned clock).
The bias gate is acknowledgment-based: a bound card with documented caveats
must be explicitly signed off in the configuration.
"""
from __future__ import annotations

import subprocess
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import canonical
from .configuration import (
    ProductConfiguration, ResourceTotals, aggregate_resources,
    validate_product_configuration,
)
from .errors import DerivationError
from .feature_model import FeatureKind, FeatureModel, Selection
from .fm_dsl import serialize_feature_model
from .model_cards import CardRegistry, card_to_dict, normalize_metric
from .monitoring import (
    AlertLevel, MonitorSpec, Trace, monitor_spec_to_dict, run_monitor,
)
from .replacement import ReplacementStrategy, strategy_to_dict

DETERMINISTIC_TIMESTAMP = "1970-01-01T00:00:00Z"


@dataclass(frozen=True)
class ProductManifest:
    doc: Mapping

    @property
    def product_id(self) -> str:
        return self.doc["product_id"]

    def to_json(self) -> str:
        return canonical.dumps(dict(self.doc)) + "\n"

    @staticmethod
    def from_json(text: str) -> "ProductManifest":
        import json
        return ProductManifest(json.loads(text))


def derive_product(model: FeatureModel, sel: Selection, cfg: ProductConfiguration,
                   registry: CardRegistry,
                   monitor_specs: Sequence[MonitorSpec] = (),
                   strategies: Sequence[ReplacementStrategy] = (),
                   now: Optional[str] = None) -> ProductManifest:
    report = validate_product_configuration(cfg, model, sel, registry)
    if not report.ok:
        codes = sorted({f.code for f in report.findings if f.severity == "error"})
        raise DerivationError("configuration invalid: " + ", ".join(codes))

    monitors_by_component = {m.component_id: m for m in monitor_specs}
    strategies_by_component = {s.component_id: s for s in strategies}

    bindings = []
    attached_monitors = []
    attached_strategies = []
    for fid in sorted(sel.chosen):
        if model.feature(fid).kind is not FeatureKind.ML_BASED:
            continue
        ref = cfg.feature_binding[fid]
        card = registry.latest(ref.id)
        bindings.append({"feature": fid, "component_id": ref.id,
                         "card_version": card.version})
        monitor = monitors_by_component.get(ref.id)
        if monitor is None:
            raise DerivationError(f"MISSING_MONITOR: ml binding {ref.id} has no monitor spec")
        attached_monitors.append(monitor_spec_to_dict(monitor))
        strategy = strategies_by_component.get(ref.id)
        if strategy is not None:
            attached_strategies.append(strategy_to_dict(strategy))

    model_hash = canonical.text_hash(serialize_feature_model(model))
    registry_hash = canonical.content_hash(
        [card_to_dict(registry.entries[k]) for k in sorted(registry.entries)])
    timestamp = now if now is not None else datetime.now(timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ")

    doc = {
        "product_id": f"{cfg.configuration_id}::{model_hash[:12]}",
        "source_configuration_id": cfg.configuration_id,
        "selected_features": sorted(sel.chosen),
        "bindings": bindings,
        "monitor_specs": attached_monitors,
        "replacement_strategies": attached_strategies,
        "resource_totals": aggregate_resources(cfg).to_dict(),
        "quality_objectives": {
            k: {"direction": o.direction, "target": o.target}
            for k, o in cfg.quality_objectives.items()},
        "validation_requirements": {
            "functional_tests": [dict(t) for t in cfg.functional_tests],
            "performance_benchmarks": [dict(t) for t in cfg.performance_benchmarks],
            "quality_assertions": [dict(t) for t in cfg.quality_assertions],
            "compliance_checks": [dict(t) for t in cfg.compliance_checks],
        },
        "acknowledge_caveats": sorted(cfg.acknowledge_caveats),
        "provenance": {
            "model_hash": model_hash,
            "registry_hash": registry_hash,
            "timestamp": timestamp,
        },
    }
    return ProductManifest(doc)


# --- validation suite -------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    category: str  # functional | performance | quality | compliance | bias | stability
    status: str    # pass | fail | skip
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "category": self.category,
                "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    verdict: str  # accept | reject

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks], "verdict": self.verdict}


def run_validation_suite(manifest: ProductManifest, registry: CardRegistry,
                         trace: Optional[Trace] = None,
                         reference: Optional[Sequence[float]] = None,
                         budget: Optional[Mapping] = None,
                         run_commands: bool = True) -> ValidationReport:
    doc = manifest.doc
    checks: list[CheckResult] = []
    acknowledged = set(doc.get("acknowledge_caveats", []))
    bound_cards = {}
    for binding in doc.get("bindings", []):
        card = registry.lookup(binding["component_id"], binding["card_version"])
        if card is None:
            raise DerivationError(
                f"manifest names unknown card {binding['component_id']}"
                f"@{binding['card_version']}")
        bound_cards[binding["component_id"]] = card

    # quality: accuracy objectives vs bound-card metrics
    objectives = doc.get("quality_objectives", {})
    accuracy_targets = {name: o for name, o in objectives.items()
                        if name.lower() == "accuracy" and o["direction"] == "maximize"}
    for component_id, card in sorted(bound_cards.items()):
        acc = card.normalized_accuracy()
        for name, o in sorted(accuracy_targets.items()):
            ok = acc is not None and o["target"] <= acc
            checks.append(CheckResult(
                f"{name}:{component_id}", "quality",
                "pass" if ok else "fail",
                f"target {o['target']} vs card accuracy {acc}"))
    for assertion in doc.get("validation_requirements", {}).get("quality_assertions", []):
        card = bound_cards.get(assertion.get("component", ""))
        if card is None:
            checks.append(CheckResult(assertion["name"], "quality", "skip",
                                      "component not bound"))
            continue
        value = card.performance_metrics.get(assertion["metric"])
        ok = value is not None and normalize_metric(value) >= assertion["min"]
        checks.append(CheckResult(assertion["name"], "quality",
                                  "pass" if ok else "fail",
                                  f"{assertion['metric']}={value}"))

    # compliance: card sections always, license allowlist when declared
    from .model_cards import validate_card
    for component_id, card in sorted(bound_cards.items()):
        diags = validate_card(card)
        checks.append(CheckResult(f"card_sections:{component_id}", "compliance",
                                  "pass" if not diags else "fail", "; ".join(diags)))
    for check in doc.get("validation_requirements", {}).get("compliance_checks", []):
        if check.get("kind") == "license_allowlist":
            allowed = set(check.get("licenses", []))
            bad = sorted(cid for cid, card in bound_cards.items()
                         if card.license not in allowed)
            checks.append(CheckResult(check["name"], "compliance",
                                      "pass" if not bad else "fail",
                                      "disallowed license on: " + ", ".join(bad)
                                      if bad else ""))

    # bias gate: documented caveats must be acknowledged
    for component_id, card in sorted(bound_cards.items()):
        if not card.caveats:
            checks.append(CheckResult(f"bias:{component_id}", "bias", "pass",
                                      "no documented caveats"))
        elif component_id in acknowledged:
            checks.append(CheckResult(f"bias:{component_id}", "bias", "pass",
                                      "caveats acknowledged"))
        else:
            checks.append(CheckResult(
                f"bias:{component_id}", "bias", "fail",
                f"unacknowledged caveat on {component_id}: {card.caveats[0]}"))

    # stability: replay the trace through every attached monitor
    from .monitoring import monitor_spec_from_dict
    if trace is not None and doc.get("monitor_specs"):
        for spec_doc in doc["monitor_specs"]:
            spec = monitor_spec_from_dict(spec_doc)
            alerts = run_monitor(spec, trace, reference)
            criticals = [a for a in alerts if a.level is AlertLevel.CRITICAL]
            checks.append(CheckResult(
                f"trace_replay:{spec.component_id}", "stability",
                "pass" if not criticals else "fail",
                f"{len(criticals)} critical alert(s)" if criticals else "no critical alerts"))
    else:
        checks.append(CheckResult("trace_replay", "stability", "skip",
                                  "no trace supplied"))

    # resource budget
    if budget is not None:
        totals = doc["resource_totals"]
        over = []
        if totals["cpu_cores"] > budget.get("cpu_cores", float("inf")):
            over.append("cpu_cores")
        if totals["ram_gb"] > budget.get("ram_gb", float("inf")):
            over.append("ram_gb")
        if totals["gpu_count"] > budget.get("gpu_count", float("inf")):
            over.append("gpu_count")
        checks.append(CheckResult("resource_budget", "performance",
                                  "pass" if not over else "fail",
                                  "over budget: " + ", ".join(over) if over else ""))
    else:
        checks.append(CheckResult("resource_budget", "performance", "skip",
                                  "no budget supplied"))

    # declared external commands
    vr = doc.get("validation_requirements", {})
    for category, key in (("functional", "functional_tests"),
                          ("performance", "performance_benchmarks")):
        declared = vr.get(key, [])
        if not declared:
            checks.append(CheckResult(key, category, "skip", "none declared"))
            continue
        for test in declared:
            command = test.get("command")
            if not command or not run_commands:
                checks.append(CheckResult(test["name"], category, "skip",
                                          "no command" if not command else "disabled"))
                continue
            proc = subprocess.run(command, shell=True, capture_output=True, text=True)
            checks.append(CheckResult(test["name"], category,
                                      "pass" if proc.returncode == 0 else "fail",
                                      f"exit {proc.returncode}"))

    checks.sort(key=lambda c: (c.category, c.name))
    verdict = "accept" if not any(c.status == "fail" for c in checks) else "reject"
    return ValidationReport(tuple(checks), verdict)
