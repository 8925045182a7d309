"""Alert-driven component replacement: hierarchy walk, eligibility, fallback.

ML alternatives qualify through the card registry (requirement predicate plus
resource fit); traditional software alternatives qualify when declared in the
registry's software-component list. The binding state machine is pure: each
transition returns a new state with an appended history entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace as dc_replace
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from .errors import MlsplError
from .model_cards import (
    CardRegistry, FeatureRequirement, ResourceAllocation, check_resource_fit,
    matches_requirement,
)
from .monitoring import Alert, AlertLevel, format_timestamp


class FallbackStrategy(str, Enum):
    ALLOW_ALL = "AllowAll"
    CONSERVATIVE_RULE_BASED_BLOCKING = "ConservativeRuleBasedBlocking"
    RULE_BASED_BLOCKING = "RuleBasedBlocking"
    MANUAL_REVIEW = "ManualReview"
    GRACEFUL_SHUTDOWN = "GracefulShutdown"


class ComponentType(str, Enum):
    ML_MODEL = "ml_model"
    SOFTWARE_COMPONENT = "software_component"


@dataclass(frozen=True)
class ComponentReference:
    id: str
    type: ComponentType = ComponentType.ML_MODEL
    reason: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "type": self.type.value, "reason": self.reason}

    @staticmethod
    def from_dict(doc: Mapping) -> "ComponentReference":
        return ComponentReference(
            id=doc["id"],
            type=ComponentType(doc.get("type", "ml_model")),
            reason=doc.get("reason", ""),
        )


@dataclass(frozen=True)
class ReplacementStrategy:
    component_id: str
    primary_alternative: ComponentReference
    secondary_alternatives: tuple[ComponentReference, ...]
    fallback_strategy: FallbackStrategy

    def __post_init__(self):
        ids = [self.primary_alternative.id] + [a.id for a in self.secondary_alternatives]
        if len(set(ids)) != len(ids) or self.component_id in ids:
            raise MlsplError(
                f"strategy {self.component_id}: alternative ids must be pairwise "
                "distinct and differ from the component itself")

    def alternatives(self) -> list[ComponentReference]:
        return [self.primary_alternative, *self.secondary_alternatives]


def strategy_from_dict(doc: Mapping) -> ReplacementStrategy:
    h = doc["replacement_hierarchy"]
    fb = h["fallback_strategy"]
    fb_type = fb["type"] if isinstance(fb, Mapping) else fb
    return ReplacementStrategy(
        component_id=doc["component_id"],
        primary_alternative=ComponentReference.from_dict(h["primary_alternative"]),
        secondary_alternatives=tuple(
            ComponentReference.from_dict(a) for a in h.get("secondary_alternatives", [])),
        fallback_strategy=FallbackStrategy(fb_type),
    )


def strategy_to_dict(s: ReplacementStrategy) -> dict:
    return {
        "component_id": s.component_id,
        "replacement_hierarchy": {
            "primary_alternative": s.primary_alternative.to_dict(),
            "secondary_alternatives": [a.to_dict() for a in s.secondary_alternatives],
            "fallback_strategy": {"type": s.fallback_strategy.value},
        },
    }


def load_strategy(path: Path) -> ReplacementStrategy:
    return strategy_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# --- selection ----------------------------------------------------------------

@dataclass(frozen=True)
class Rejection:
    reference: ComponentReference
    violation: str


@dataclass(frozen=True)
class ReplacementDecision:
    outcome: str  # SWITCHED | FALLBACK
    selected: Union[ComponentReference, FallbackStrategy]
    rejected: tuple[Rejection, ...]

    def to_dict(self) -> dict:
        selected = (self.selected.to_dict() if isinstance(self.selected, ComponentReference)
                    else {"fallback": self.selected.value})
        return {
            "outcome": self.outcome,
            "selected": selected,
            "rejected": [{"reference": r.reference.to_dict(), "violation": r.violation}
                         for r in self.rejected],
        }


def qualify(reference: ComponentReference, registry: CardRegistry,
            req: FeatureRequirement, alloc: ResourceAllocation) -> Optional[str]:
    """First violation keeping this alternative out, or None if it qualifies."""
    if reference.type is ComponentType.SOFTWARE_COMPONENT:
        if not registry.has_software_component(reference.id):
            return "software component not declared"
        return None
    card = registry.latest(reference.id)
    if card is None:
        return "no card registered"
    if not matches_requirement(card, req):
        return "requirement predicate failed"
    fit = check_resource_fit(card, alloc)
    if not fit.fits:
        return f"resource fit failed: {fit.violations[0]}"
    return None


def select_replacement(strategy: ReplacementStrategy, registry: CardRegistry,
                       req: FeatureRequirement,
                       alloc: ResourceAllocation) -> ReplacementDecision:
    """Walk the hierarchy in order; first qualifying alternative wins."""
    rejected: list[Rejection] = []
    for alt in strategy.alternatives():
        violation = qualify(alt, registry, req, alloc)
        if violation is None:
            return ReplacementDecision("SWITCHED", alt, tuple(rejected))
        rejected.append(Rejection(alt, violation))
    return ReplacementDecision("FALLBACK", strategy.fallback_strategy, tuple(rejected))


# --- binding state machine ------------------------------------------------------

class BindingMode(str, Enum):
    ACTIVE = "ACTIVE"
    DEGRADED = "DEGRADED"
    REPLACED = "REPLACED"
    FALLBACK = "FALLBACK"


@dataclass(frozen=True)
class Transition:
    ts: datetime
    from_mode: BindingMode
    to_mode: BindingMode
    cause: str

    def to_dict(self) -> dict:
        return {"ts": format_timestamp(self.ts), "from": self.from_mode.value,
                "to": self.to_mode.value, "cause": self.cause}


@dataclass(frozen=True)
class BindingState:
    component_id: str
    mode: BindingMode = BindingMode.ACTIVE
    active_binding: Union[ComponentReference, FallbackStrategy, None] = None
    history: tuple[Transition, ...] = ()

    def to_dict(self) -> dict:
        if isinstance(self.active_binding, ComponentReference):
            binding = self.active_binding.to_dict()
        elif isinstance(self.active_binding, FallbackStrategy):
            binding = {"fallback": self.active_binding.value}
        else:
            binding = None
        return {
            "component_id": self.component_id,
            "mode": self.mode.value,
            "active_binding": binding,
            "history": [t.to_dict() for t in self.history],
        }


def advance_binding(state: BindingState, alert: Alert, strategy: ReplacementStrategy,
                    registry: CardRegistry, req: FeatureRequirement,
                    alloc: ResourceAllocation) -> BindingState:
    """One state-machine step; REPLACED and FALLBACK are absorbing."""
    if alert.component_id != state.component_id:
        raise MlsplError(
            f"alert for {alert.component_id} applied to binding {state.component_id}")
    mode = state.mode
    if mode in (BindingMode.REPLACED, BindingMode.FALLBACK):
        return state

    if alert.level is AlertLevel.OK:
        if mode is BindingMode.DEGRADED:
            return _transition(state, BindingMode.ACTIVE, alert, binding=None)
        return state
    if alert.level is AlertLevel.WARNING:
        if mode is BindingMode.ACTIVE:
            return _transition(state, BindingMode.DEGRADED, alert, binding=None)
        return state

    # CRITICAL from ACTIVE or DEGRADED
    decision = select_replacement(strategy, registry, req, alloc)
    if decision.outcome == "SWITCHED":
        return _transition(state, BindingMode.REPLACED, alert, binding=decision.selected)
    return _transition(state, BindingMode.FALLBACK, alert, binding=decision.selected)


def _transition(state: BindingState, to_mode: BindingMode, alert: Alert,
                binding) -> BindingState:
    entry = Transition(alert.ts, state.mode, to_mode, alert.subject)
    return dc_replace(state, mode=to_mode,
                      active_binding=binding if binding is not None else state.active_binding,
                      history=state.history + (entry,))
