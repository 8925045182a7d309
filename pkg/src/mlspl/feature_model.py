"""Feature models: variability tree, cross-tree constraints, ML quality profiles.

All reasoning (validity, enumeration, decision propagation) is exact and
exhaustive over a compiled bitmask representation; a size guard keeps the
exponential enumeration at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import GuardLimitError, InvalidModelError, UnknownIdError

ENUMERATION_GUARD = 24


class FeatureKind(str, Enum):
    CLASSIC = "classic"
    ML_BASED = "ml_based"


class GroupKind(str, Enum):
    MANDATORY = "mandatory"
    OPTIONAL = "optional"
    OR_GROUP = "or_group"
    XOR_GROUP = "xor_group"


# --- propositional constraint expressions -------------------------------

class Expr:
    """Propositional formula over feature ids."""

    def evaluate(self, assignment: Callable[[str], bool]) -> bool:
        raise NotImplementedError

    def variables(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def evaluate(self, assignment):
        return assignment(self.name)

    def variables(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr

    def evaluate(self, assignment):
        return not self.operand.evaluate(assignment)

    def variables(self):
        return self.operand.variables()

    def __str__(self):
        return f"NOT {self._wrap(self.operand)}"

    @staticmethod
    def _wrap(e):
        return f"({e})" if not isinstance(e, (Var, Not)) else str(e)


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # AND | OR | IMPLIES | IFF
    left: Expr
    right: Expr

    def evaluate(self, assignment):
        a = self.left.evaluate(assignment)
        if self.op == "AND":
            return a and self.right.evaluate(assignment)
        if self.op == "OR":
            return a or self.right.evaluate(assignment)
        b = self.right.evaluate(assignment)
        if self.op == "IMPLIES":
            return (not a) or b
        if self.op == "IFF":
            return a == b
        raise ValueError(f"unknown operator {self.op}")

    def variables(self):
        return self.left.variables() | self.right.variables()

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


# --- domain types --------------------------------------------------------

@dataclass(frozen=True)
class Feature:
    id: str
    name: str
    kind: FeatureKind = FeatureKind.CLASSIC
    quality_profile_ref: Optional[str] = None


@dataclass(frozen=True)
class FeatureGroup:
    parent: str
    members: tuple[str, ...]
    kind: GroupKind
    min_card: int = 0
    max_card: int = 0

    @staticmethod
    def make(parent: str, members: Sequence[str], kind: GroupKind,
             min_card: Optional[int] = None, max_card: Optional[int] = None) -> "FeatureGroup":
        members = tuple(members)
        n = len(members)
        if kind is GroupKind.MANDATORY:
            lo, hi = n, n
        elif kind is GroupKind.OPTIONAL:
            lo, hi = 0, n
        elif kind is GroupKind.XOR_GROUP:
            lo, hi = 1, 1
        else:
            lo = 1 if min_card is None else min_card
            hi = n if max_card is None else max_card
        return FeatureGroup(parent, members, kind, lo, hi)


@dataclass(frozen=True)
class CrossTreeConstraint:
    expr: Expr

    def __str__(self):
        return str(self.expr)


@dataclass(frozen=True)
class FeatureQualityProfile:
    """Probabilistic quality descriptor of an ML-based feature.

    accuracy_range is an aggregate-level descriptor and is deliberately not
    enforced as a bound on the per-context accuracies.
    """
    feature_id: str
    ml_component_id: str
    accuracy_range: tuple[float, float]
    context_sensitivity: Mapping[str, float]
    confidence_intervals: Mapping[str, tuple[float, float]]
    feature_type: str = "ML-based"

    def validate(self) -> None:
        lo, hi = self.accuracy_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise InvalidModelError(
                f"profile {self.feature_id}: accuracy_range [{lo}, {hi}] not ordered in [0,1]")
        for label, acc in self.context_sensitivity.items():
            if not (0.0 <= acc <= 1.0):
                raise InvalidModelError(
                    f"profile {self.feature_id}: context {label} accuracy {acc} outside [0,1]")
        ivals = sorted(self.confidence_intervals.items(), key=lambda kv: kv[1][0])
        for label, (a, b) in ivals:
            if a > b:
                raise InvalidModelError(
                    f"profile {self.feature_id}: confidence interval {label} has lo > hi")
        for (la, (_, a_hi)), (lb, (b_lo, _)) in zip(ivals, ivals[1:]):
            if b_lo <= a_hi:
                raise InvalidModelError(
                    f"profile {self.feature_id}: confidence intervals {la} and {lb} overlap")


@dataclass(frozen=True)
class Selection:
    chosen: frozenset[str]

    @staticmethod
    def of(ids: Iterable[str]) -> "Selection":
        return Selection(frozenset(ids))


@dataclass(frozen=True)
class DecisionState:
    decided_true: frozenset[str]
    decided_false: frozenset[str]
    forced_true: frozenset[str]
    forced_false: frozenset[str]
    open: frozenset[str]
    consistent: bool


@dataclass(frozen=True)
class FeatureModel:
    root: str
    features: tuple[Feature, ...]
    groups: tuple[FeatureGroup, ...]
    constraints: tuple[CrossTreeConstraint, ...] = ()
    profiles: tuple[FeatureQualityProfile, ...] = ()
    _compiled: object = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        # profiles are a set; keep a canonical order so structural equality
        # is independent of declaration order
        object.__setattr__(self, "profiles",
                           tuple(sorted(self.profiles, key=lambda p: p.feature_id)))
        self._validate()

    # lookups -------------------------------------------------------------
    def feature_ids(self) -> list[str]:
        return sorted(f.id for f in self.features)

    def feature(self, fid: str) -> Feature:
        for f in self.features:
            if f.id == fid:
                return f
        raise UnknownIdError(f"unknown feature id: {fid}")

    def profile(self, pid: str) -> FeatureQualityProfile:
        for p in self.profiles:
            if p.feature_id == pid:
                return p
        raise UnknownIdError(f"unknown profile: {pid}")

    # invariants ------------------------------------------------------------
    def _validate(self) -> None:
        ids = [f.id for f in self.features]
        idset = set(ids)
        if len(ids) != len(idset):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidModelError(f"duplicate feature ids: {', '.join(dupes)}")
        if self.root not in idset:
            raise InvalidModelError(f"root feature {self.root} not declared")

        profile_ids = {p.feature_id for p in self.profiles}
        if len(profile_ids) != len(self.profiles):
            raise InvalidModelError("duplicate profile ids")
        for p in self.profiles:
            p.validate()
        for f in self.features:
            if f.kind is FeatureKind.ML_BASED:
                if f.quality_profile_ref is None:
                    raise InvalidModelError(f"ml_based feature {f.id} has no quality profile")
                if f.quality_profile_ref not in profile_ids:
                    raise UnknownIdError(
                        f"unknown profile {f.quality_profile_ref} referenced by {f.id}")
            elif f.quality_profile_ref is not None:
                raise InvalidModelError(f"classic feature {f.id} must not reference a profile")

        membership: dict[str, str] = {}
        for g in self.groups:
            if not g.members:
                raise InvalidModelError(f"empty group under {g.parent}")
            if g.parent not in idset:
                raise UnknownIdError(f"group parent {g.parent} not declared")
            for m in g.members:
                if m not in idset:
                    raise UnknownIdError(f"group member {m} not declared")
                if m in membership:
                    raise InvalidModelError(f"feature {m} is a member of two groups")
                membership[m] = g.parent
            if g.min_card > g.max_card:
                raise InvalidModelError(f"group under {g.parent}: min > max cardinality")
            if g.kind is GroupKind.XOR_GROUP and (g.min_card, g.max_card) != (1, 1):
                raise InvalidModelError(f"xor group under {g.parent} must have cardinality (1,1)")
            if g.kind is GroupKind.OR_GROUP and not (1 <= g.min_card and g.max_card <= len(g.members)):
                raise InvalidModelError(f"or group under {g.parent}: cardinality out of bounds")

        for fid in idset:
            if fid == self.root:
                if fid in membership:
                    raise InvalidModelError("root feature cannot be a group member")
                continue
            if fid not in membership:
                raise InvalidModelError(f"feature {fid} is not attached to any group")
        # parent links must reach the root (acyclic by reachability check)
        for fid in idset:
            seen = set()
            cur = fid
            while cur != self.root:
                if cur in seen:
                    raise InvalidModelError(f"cycle in parent links at {cur}")
                seen.add(cur)
                cur = membership[cur]

        for c in self.constraints:
            for v in c.expr.variables():
                if v not in idset:
                    raise UnknownIdError(f"unknown feature id in constraint: {v}")

    # compiled evaluator ----------------------------------------------------
    def _compile(self) -> "_CompiledModel":
        if self._compiled is None:
            object.__setattr__(self, "_compiled", _CompiledModel(self))
        return self._compiled  # type: ignore[return-value]


class _CompiledModel:
    """Bitmask evaluator; bit (n-1-i) holds feature i in sorted-id order, so
    ascending integers enumerate characteristic bit-vectors lexicographically."""

    def __init__(self, model: FeatureModel):
        self.order = model.feature_ids()
        self.n = len(self.order)
        self.bit = {fid: 1 << (self.n - 1 - i) for i, fid in enumerate(self.order)}
        self.root_bit = self.bit[model.root]
        self.groups = []
        for g in model.groups:
            member_mask = 0
            for m in g.members:
                member_mask |= self.bit[m]
            self.groups.append((self.bit[g.parent], member_mask, g.kind, g.min_card, g.max_card))
        self.constraints = [self._compile_expr(c.expr) for c in model.constraints]

    def _compile_expr(self, e: Expr) -> Callable[[int], bool]:
        if isinstance(e, Var):
            b = self.bit[e.name]
            return lambda m: bool(m & b)
        if isinstance(e, Not):
            f = self._compile_expr(e.operand)
            return lambda m: not f(m)
        assert isinstance(e, BinOp)
        fl, fr = self._compile_expr(e.left), self._compile_expr(e.right)
        if e.op == "AND":
            return lambda m: fl(m) and fr(m)
        if e.op == "OR":
            return lambda m: fl(m) or fr(m)
        if e.op == "IMPLIES":
            return lambda m: (not fl(m)) or fr(m)
        return lambda m: fl(m) == fr(m)

    def mask_of(self, ids: Iterable[str]) -> int:
        m = 0
        for fid in ids:
            if fid not in self.bit:
                raise UnknownIdError(f"unknown feature id: {fid}")
            m |= self.bit[fid]
        return m

    def ids_of(self, mask: int) -> frozenset[str]:
        return frozenset(fid for fid, b in self.bit.items() if mask & b)

    def is_valid(self, mask: int) -> bool:
        if not (mask & self.root_bit):
            return False
        for parent_bit, member_mask, kind, lo, hi in self.groups:
            selected = mask & member_mask
            if not (mask & parent_bit):
                if selected:
                    return False
                continue
            count = bin(selected).count("1")
            if kind is GroupKind.MANDATORY:
                if selected != member_mask:
                    return False
            elif kind is GroupKind.OPTIONAL:
                pass
            else:
                if not (lo <= count <= hi):
                    return False
        return all(f(mask) for f in self.constraints)

    def valid_masks(self) -> list[int]:
        return [m for m in range(1 << self.n) if self.is_valid(m)]


# --- operations ----------------------------------------------------------

def is_valid_configuration(model: FeatureModel, sel: Selection) -> bool:
    """True iff the selection is a complete, constraint-satisfying product."""
    c = model._compile()
    return c.is_valid(c.mask_of(sel.chosen))


def enumerate_valid_configurations(model: FeatureModel,
                                   guard: int = ENUMERATION_GUARD) -> list[Selection]:
    """All valid selections, lexicographic by characteristic bit-vector."""
    c = model._compile()
    if c.n > guard:
        raise GuardLimitError(f"model has {c.n} features, enumeration guard is {guard}")
    return [Selection(c.ids_of(m)) for m in c.valid_masks()]


def propagate_decisions(model: FeatureModel, decisions: Mapping[str, bool],
                        guard: int = ENUMERATION_GUARD) -> DecisionState:
    """Sound and complete propagation via exhaustive completion search."""
    c = model._compile()
    if c.n > guard:
        raise GuardLimitError(f"model has {c.n} features, enumeration guard is {guard}")
    for fid in decisions:
        if fid not in c.bit:
            raise UnknownIdError(f"unknown feature id: {fid}")
    decided_true = frozenset(f for f, v in decisions.items() if v)
    decided_false = frozenset(f for f, v in decisions.items() if not v)
    true_mask = c.mask_of(decided_true)
    false_mask = c.mask_of(decided_false)

    completions = [m for m in c.valid_masks()
                   if (m & true_mask) == true_mask and not (m & false_mask)]
    all_ids = frozenset(c.order)
    decided = decided_true | decided_false
    if not completions:
        return DecisionState(decided_true, decided_false, frozenset(), frozenset(),
                             all_ids - decided, consistent=False)
    inter = completions[0]
    union = 0
    for m in completions:
        inter &= m
        union |= m
    forced_true = c.ids_of(inter) - decided
    forced_false = (all_ids - c.ids_of(union)) - decided
    open_ids = all_ids - decided - forced_true - forced_false
    return DecisionState(decided_true, decided_false, forced_true, forced_false,
                         open_ids, consistent=True)


def expected_quality(profile: FeatureQualityProfile,
                     weights: Mapping[str, float]) -> float:
    """Weighted mean context accuracy; empty weights means uniform."""
    contexts = profile.context_sensitivity
    if not contexts:
        raise UnknownIdError(f"profile {profile.feature_id} has no contexts")
    if not weights:
        weights = {label: 1.0 for label in contexts}
    total = 0.0
    acc = 0.0
    for label, w in weights.items():
        if label not in contexts:
            raise UnknownIdError(f"unknown context label: {label}")
        if w < 0:
            raise ValueError(f"negative weight for {label}")
        total += w
        acc += w * contexts[label]
    if total == 0:
        raise ValueError("all context weights are zero")
    return acc / total


def classify_confidence(profile: FeatureQualityProfile, value: float) -> str:
    """Bin a value by lower-bound thresholds; gap values fall to the lower bin."""
    if not profile.confidence_intervals:
        raise InvalidModelError(f"profile {profile.feature_id} has no confidence intervals")
    by_lo = sorted(profile.confidence_intervals.items(), key=lambda kv: kv[1][0])
    best = by_lo[0][0]
    for label, (lo, _) in by_lo:
        if lo <= value:
            best = label
    return best


# --- JSON views ----------------------------------------------------------

def profile_to_dict(p: FeatureQualityProfile) -> dict:
    """Standalone profile document using the published field names."""
    return {
        "feature_id": p.feature_id,
        "feature_type": p.feature_type,
        "ml_component_id": p.ml_component_id,
        "quality_distribution": {
            "accuracy_range": list(p.accuracy_range),
            "context_sensitivity": dict(p.context_sensitivity),
            "confidence_intervals": {k: list(v) for k, v in p.confidence_intervals.items()},
        },
    }


def profile_from_dict(doc: Mapping) -> FeatureQualityProfile:
    qd = doc["quality_distribution"]
    p = FeatureQualityProfile(
        feature_id=doc["feature_id"],
        ml_component_id=doc["ml_component_id"],
        accuracy_range=tuple(qd["accuracy_range"]),
        context_sensitivity=dict(qd["context_sensitivity"]),
        confidence_intervals={k: tuple(v) for k, v in qd["confidence_intervals"].items()},
        feature_type=doc.get("feature_type", "ML-based"),
    )
    p.validate()
    return p


def model_to_dict(model: FeatureModel) -> dict:
    return {
        "root": model.root,
        "features": [
            {"id": f.id, "name": f.name, "kind": f.kind.value,
             "quality_profile_ref": f.quality_profile_ref}
            for f in sorted(model.features, key=lambda f: f.id)
        ],
        "groups": [
            {"parent": g.parent, "members": list(g.members), "kind": g.kind.value,
             "cardinality": [g.min_card, g.max_card]}
            for g in model.groups
        ],
        "constraints": [str(c) for c in model.constraints],
        "profiles": [profile_to_dict(p)
                     for p in sorted(model.profiles, key=lambda p: p.feature_id)],
    }
