"""Randomized feature-model generation for oracle-based tests."""
from __future__ import annotations

import random

from mlspl.feature_model import (
    BinOp, CrossTreeConstraint, Feature, FeatureGroup, FeatureModel, GroupKind,
    Not, Var,
)

_GROUP_KINDS = [GroupKind.MANDATORY, GroupKind.OPTIONAL,
                GroupKind.OR_GROUP, GroupKind.XOR_GROUP]


def random_model(seed: int, max_features: int = 12) -> FeatureModel:
    """Random well-formed feature model with up to max_features features."""
    rng = random.Random(seed)
    n = rng.randint(3, max_features)
    ids = [f"F{i}" for i in range(n)]
    features = [Feature(fid, fid) for fid in ids]
    groups = []
    attached = [ids[0]]
    pending = ids[1:]
    while pending:
        parent = rng.choice(attached)
        size = min(rng.randint(1, 3), len(pending))
        members = pending[:size]
        pending = pending[size:]
        kind = rng.choice(_GROUP_KINDS)
        if kind is GroupKind.XOR_GROUP and size < 2:
            kind = GroupKind.OPTIONAL
        if kind is GroupKind.OR_GROUP:
            lo = rng.randint(1, size)
            hi = rng.randint(lo, size)
            groups.append(FeatureGroup.make(parent, members, kind, lo, hi))
        else:
            groups.append(FeatureGroup.make(parent, members, kind))
        attached.extend(members)

    constraints = []
    for _ in range(rng.randint(0, 2)):
        a, b = rng.sample(ids, 2)
        op = rng.choice(["IMPLIES", "OR", "IFF"])
        left = Var(a) if rng.random() < 0.7 else Not(Var(a))
        right = Var(b) if rng.random() < 0.7 else Not(Var(b))
        constraints.append(CrossTreeConstraint(BinOp(op, left, right)))

    return FeatureModel(root=ids[0], features=tuple(features),
                        groups=tuple(groups), constraints=tuple(constraints))
