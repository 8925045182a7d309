"""SPL-aware Model Cards: validation, registry persistence, candidate matching.

Cards keep the published snake_case field names; the loader also accepts the
hyphenated spelling ``out-of-scope_use``. Accuracy values above 1 are read as
percentages and normalized to the unit interval at comparison time.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Mapping, Optional

from . import canonical
from .errors import CardError, DuplicateCardError


class IntegrationComplexity(IntEnum):
    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @staticmethod
    def parse(text: str) -> "IntegrationComplexity":
        try:
            return IntegrationComplexity[text.upper()]
        except KeyError:
            raise CardError(f"unknown integration complexity: {text!r}")

    def label(self) -> str:
        return self.name.capitalize()


_SECTIONS = (
    "model_details", "intended_use", "spl_reusability_profile", "model_usage",
    "performance_metrics", "operational_requirements", "caveats",
)


@dataclass(frozen=True)
class ModelCard:
    model_id: str
    version: int
    developed_by: str
    model_type: str
    license: str
    primary_use: str
    out_of_scope_use: str
    supported_domains: tuple[str, ...]
    integration_complexity: str
    api_endpoint: str
    deployment_guidance: str
    performance_metrics: Mapping[str, float]
    cpu: str
    ram: str
    gpu: str
    notes: str = ""
    caveats: tuple[str, ...] = ()

    # derived accessors -----------------------------------------------------
    def normalized_accuracy(self) -> Optional[float]:
        """Accuracy on the unit scale; percent values (>1) are divided by 100."""
        acc = self.performance_metrics.get("Accuracy")
        if acc is None:
            return None
        return normalize_metric(acc)

    def min_cpu_cores(self) -> int:
        m = re.search(r"\d+", self.cpu)
        if not m:
            raise CardError(f"unparseable cpu requirement: {self.cpu!r}")
        return int(m.group())

    def ram_gb(self) -> float:
        m = re.search(r"(\d+(?:\.\d+)?)\s*GB", self.ram, re.IGNORECASE)
        if not m:
            raise CardError(f"unparseable ram requirement: {self.ram!r}")
        value = float(m.group(1))
        if value <= 0:
            raise CardError(f"ram must be positive: {self.ram!r}")
        return value

    def gpu_required(self) -> bool:
        text = self.gpu.strip()
        return bool(text) and text.lower() not in ("optional", "none", "no")

    def complexity(self) -> IntegrationComplexity:
        return IntegrationComplexity.parse(self.integration_complexity)


def normalize_metric(value: float) -> float:
    return value / 100.0 if value > 1.0 else value


@dataclass(frozen=True)
class FeatureRequirement:
    domain: str
    min_accuracy: float = 0.0
    max_integration_complexity: IntegrationComplexity = IntegrationComplexity.HIGH
    license_allowlist: frozenset[str] = frozenset()


def validate_card(doc_or_card) -> list[str]:
    """Diagnostics for a card; empty list means the card is valid.

    Accepts either a raw JSON mapping (checks section presence too) or a
    ModelCard value.
    """
    diags: list[str] = []
    if isinstance(doc_or_card, ModelCard):
        card = doc_or_card
    else:
        doc = doc_or_card
        for section in _SECTIONS:
            if section == "caveats":
                if "caveats" not in doc and "caveats_recommendations" not in doc:
                    diags.append("caveats: missing section")
            elif section not in doc:
                diags.append(f"{section}: missing section")
        if diags:
            return diags
        try:
            card = card_from_dict(doc)
        except (CardError, KeyError, TypeError, ValueError) as exc:
            return [f"card: {exc}"]

    if not card.model_id:
        diags.append("model_details.model_id: must be non-empty")
    if not isinstance(card.version, int) or card.version < 1:
        diags.append("model_details.version: must be an integer >= 1")
    for name, value in card.performance_metrics.items():
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            diags.append(f"performance_metrics.{name}: value must be finite")
    try:
        card.ram_gb()
    except CardError:
        diags.append("operational_requirements.ram: must parse to positive gigabytes")
    try:
        card.min_cpu_cores()
    except CardError:
        diags.append("operational_requirements.cpu: must name a core count")
    try:
        card.complexity()
    except CardError:
        diags.append("spl_reusability_profile.integration_complexity: unknown rating")
    return diags


# --- JSON (de)serialization -----------------------------------------------

def card_from_dict(doc: Mapping) -> ModelCard:
    details = doc["model_details"]
    intended = doc["intended_use"]
    reuse = doc["spl_reusability_profile"]
    usage = doc["model_usage"]
    ops = doc["operational_requirements"]
    caveats = doc.get("caveats", doc.get("caveats_recommendations", []))
    out_of_scope = intended.get("out_of_scope_use", intended.get("out-of-scope_use", ""))
    return ModelCard(
        model_id=details["model_id"],
        version=details["version"],
        developed_by=details.get("developed_by", ""),
        model_type=details.get("model_type", ""),
        license=details.get("license", ""),
        primary_use=intended.get("primary_use", ""),
        out_of_scope_use=out_of_scope,
        supported_domains=tuple(reuse.get("supported_domains", [])),
        integration_complexity=reuse.get("integration_complexity", ""),
        api_endpoint=usage.get("api_endpoint", ""),
        deployment_guidance=usage.get("deployment_guidance", ""),
        performance_metrics=dict(doc.get("performance_metrics", {})),
        cpu=ops.get("cpu", ""),
        ram=ops.get("ram", ""),
        gpu=ops.get("gpu", ""),
        notes=ops.get("notes", ""),
        caveats=tuple(caveats),
    )


def card_to_dict(card: ModelCard) -> dict:
    return {
        "model_details": {
            "model_id": card.model_id,
            "version": card.version,
            "developed_by": card.developed_by,
            "model_type": card.model_type,
            "license": card.license,
        },
        "intended_use": {
            "primary_use": card.primary_use,
            "out_of_scope_use": card.out_of_scope_use,
        },
        "spl_reusability_profile": {
            "supported_domains": list(card.supported_domains),
            "integration_complexity": card.integration_complexity,
        },
        "model_usage": {
            "api_endpoint": card.api_endpoint,
            "deployment_guidance": card.deployment_guidance,
        },
        "performance_metrics": dict(card.performance_metrics),
        "operational_requirements": {
            "cpu": card.cpu,
            "ram": card.ram,
            "gpu": card.gpu,
            "notes": card.notes,
        },
        "caveats": list(card.caveats),
    }


# --- registry --------------------------------------------------------------

@dataclass(frozen=True)
class CardRegistry:
    """Immutable card index plus the declared non-ML software components."""
    entries: Mapping[tuple[str, int], ModelCard] = field(default_factory=dict)
    software_components: Mapping[str, str] = field(default_factory=dict)

    def lookup(self, model_id: str, version: int) -> Optional[ModelCard]:
        return self.entries.get((model_id, version))

    def latest(self, model_id: str) -> Optional[ModelCard]:
        versions = [v for (mid, v) in self.entries if mid == model_id]
        if not versions:
            return None
        return self.entries[(model_id, max(versions))]

    def cards(self) -> list[ModelCard]:
        return [self.entries[k] for k in sorted(self.entries)]

    def has_software_component(self, component_id: str) -> bool:
        return component_id in self.software_components


def register_card(registry: CardRegistry, card: ModelCard) -> CardRegistry:
    diags = validate_card(card)
    if diags:
        raise CardError("invalid card: " + "; ".join(diags))
    key = (card.model_id, card.version)
    if key in registry.entries:
        raise DuplicateCardError(f"card already registered: {card.model_id}@{card.version}")
    entries = dict(registry.entries)
    entries[key] = card
    return replace(registry, entries=entries)


def matches_requirement(card: ModelCard, req: FeatureRequirement) -> bool:
    domains = {d.lower() for d in card.supported_domains}
    if req.domain.lower() not in domains:
        return False
    acc = card.normalized_accuracy()
    if acc is None or acc < req.min_accuracy:
        return False
    try:
        if card.complexity() > req.max_integration_complexity:
            return False
    except CardError:
        return False
    if req.license_allowlist and card.license not in req.license_allowlist:
        return False
    return True


def find_candidates(registry: CardRegistry, req: FeatureRequirement) -> list[ModelCard]:
    """Matching cards ranked by accuracy desc, complexity asc, id asc, version desc."""
    hits = [c for c in registry.cards() if matches_requirement(c, req)]
    hits.sort(key=lambda c: (-(c.normalized_accuracy() or 0.0), int(c.complexity()),
                             c.model_id, -c.version))
    return hits


@dataclass(frozen=True)
class ResourceAllocation:
    cpu_cores: int
    ram_gb: float
    gpu: bool = False


@dataclass(frozen=True)
class FitResult:
    fits: bool
    violations: tuple[str, ...] = ()


def check_resource_fit(card: ModelCard, alloc: ResourceAllocation) -> FitResult:
    violations = []
    try:
        if alloc.cpu_cores < card.min_cpu_cores():
            violations.append(f"cpu: requires {card.min_cpu_cores()} cores, allocated {alloc.cpu_cores}")
    except CardError as exc:
        violations.append(f"cpu: {exc}")
    try:
        if alloc.ram_gb < card.ram_gb():
            violations.append(f"ram: requires {card.ram_gb()} GB, allocated {alloc.ram_gb}")
    except CardError as exc:
        violations.append(f"ram: {exc}")
    if card.gpu_required() and not alloc.gpu:
        violations.append("gpu: required but not allocated")
    return FitResult(fits=not violations, violations=tuple(violations))


# --- persistence ------------------------------------------------------------

def save_registry(registry: CardRegistry, directory: Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for (model_id, version), card in registry.entries.items():
        name = f"{model_id.replace('/', '__')}@{version}.json"
        path = directory / name
        path.write_text(canonical.dumps_pretty(card_to_dict(card)) + "\n", encoding="utf-8")
    if registry.software_components:
        doc = [{"id": cid, "description": desc}
               for cid, desc in sorted(registry.software_components.items())]
        (directory / "software_components.json").write_text(
            canonical.dumps_pretty(doc) + "\n", encoding="utf-8")


def load_registry(directory: Path) -> CardRegistry:
    directory = Path(directory)
    entries: dict[tuple[str, int], ModelCard] = {}
    software: dict[str, str] = {}
    if not directory.is_dir():
        return CardRegistry()
    for path in sorted(directory.glob("*.json")):
        if path.name == "software_components.json":
            for item in json.loads(path.read_text(encoding="utf-8")):
                software[item["id"]] = item.get("description", "")
            continue
        doc = json.loads(path.read_text(encoding="utf-8"))
        card = card_from_dict(doc)
        key = (card.model_id, card.version)
        if key in entries:
            raise DuplicateCardError(f"duplicate card on disk: {key}")
        entries[key] = card
    return CardRegistry(entries=entries, software_components=software)


def load_software_components(path: Path) -> dict[str, str]:
    items = json.loads(Path(path).read_text(encoding="utf-8"))
    return {item["id"]: item.get("description", "") for item in items}
