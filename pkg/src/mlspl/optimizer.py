"""Multi-objective configuration search: dominance, exhaustive front, NSGA-II.

Default objective triple over a (selection, bindings) pair:
  1. maximize mean normalized accuracy of the bound cards (1.0 with no ML),
  2. minimize total card RAM in GB,
  3. minimize integration burden (Low=1, Medium=2, High=3 summed).

The search genome is one inclusion bit per feature plus one candidate index
per ML feature. Infeasible genomes are repaired by a propagation-guided
greedy pass, so the population always stays on the valid manifold. Results
are fully deterministic for a fixed seed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .errors import OptimizerError
from .feature_model import (
    FeatureKind, FeatureModel, Selection, enumerate_valid_configurations,
)
from .model_cards import CardRegistry, ModelCard
from .replacement import ComponentReference, ComponentType


@dataclass(frozen=True)
class ObjectiveVector:
    values: tuple[float, ...]
    senses: tuple[str, ...]  # maximize | minimize

    def __post_init__(self):
        if len(self.values) != len(self.senses) or len(self.values) < 2:
            raise OptimizerError("objective vector needs >= 2 aligned values/senses")
        if any(not math.isfinite(v) for v in self.values):
            raise OptimizerError("objective values must be finite")

    def to_dict(self) -> dict:
        return {"values": list(self.values), "senses": list(self.senses)}


DEFAULT_SENSES = ("maximize", "minimize", "minimize")


@dataclass(frozen=True)
class OptimizerParams:
    population_size: int = 16
    generations: int = 50
    mutation_rate: float = 0.1
    crossover_rate: float = 0.9
    seed: int = 42

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise OptimizerError("population_size must be even and >= 4")
        for rate in (self.mutation_rate, self.crossover_rate):
            if not 0.0 <= rate <= 1.0:
                raise OptimizerError("rates must be in [0, 1]")


@dataclass
class Individual:
    selection: Selection
    bindings: dict[str, ComponentReference]
    objectives: ObjectiveVector
    rank: int = 0
    crowding: float = 0.0
    genome: tuple = ()

    def to_dict(self) -> dict:
        return {
            "selection": sorted(self.selection.chosen),
            "bindings": {f: ref.to_dict() for f, ref in sorted(self.bindings.items())},
            "objectives": self.objectives.to_dict(),
        }


# --- objective evaluation ---------------------------------------------------------

def evaluate_objectives(model: FeatureModel, sel: Selection,
                        bindings: Mapping[str, ComponentReference],
                        registry: CardRegistry) -> ObjectiveVector:
    cards: list[ModelCard] = []
    for fid in sorted(sel.chosen):
        if model.feature(fid).kind is not FeatureKind.ML_BASED:
            continue
        ref = bindings.get(fid)
        if ref is None:
            raise OptimizerError(f"no binding for selected ml feature {fid}")
        card = registry.latest(ref.id)
        if card is None:
            raise OptimizerError(f"no card registered for binding {ref.id}")
        cards.append(card)
    if cards:
        quality = sum(c.normalized_accuracy() or 0.0 for c in cards) / len(cards)
        ram = sum(c.ram_gb() for c in cards)
        burden = sum(int(c.complexity()) for c in cards)
    else:
        quality, ram, burden = 1.0, 0.0, 0
    return ObjectiveVector((quality, float(ram), float(burden)), DEFAULT_SENSES)


# --- dominance --------------------------------------------------------------------

def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    if a.senses != b.senses:
        raise OptimizerError("objective senses must match")
    at_least_as_good = True
    strictly_better = False
    for av, bv, sense in zip(a.values, b.values, a.senses):
        if sense == "maximize":
            if av < bv:
                at_least_as_good = False
                break
            if av > bv:
                strictly_better = True
        else:
            if av > bv:
                at_least_as_good = False
                break
            if av < bv:
                strictly_better = True
    return at_least_as_good and strictly_better


def pareto_front_exhaustive(vectors: Sequence[ObjectiveVector]) -> set[int]:
    """Indices of non-dominated vectors; O(n^2) oracle."""
    return {i for i, a in enumerate(vectors)
            if not any(dominates(b, a) for j, b in enumerate(vectors) if j != i)}


def fast_non_dominated_sort(vectors: Sequence[ObjectiveVector]) -> list[int]:
    """Deb's sort; returns a rank per vector (0 = non-dominated)."""
    n = len(vectors)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    domination_count = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(vectors[i], vectors[j]):
                dominated_by[i].append(j)
                domination_count[j] += 1
            elif dominates(vectors[j], vectors[i]):
                dominated_by[j].append(i)
                domination_count[i] += 1
    ranks = [0] * n
    front = [i for i in range(n) if domination_count[i] == 0]
    rank = 0
    while front:
        next_front = []
        for i in front:
            ranks[i] = rank
            for j in dominated_by[i]:
                domination_count[j] -= 1
                if domination_count[j] == 0:
                    next_front.append(j)
        front = next_front
        rank += 1
    return ranks


def crowding_distance(vectors: Sequence[ObjectiveVector],
                      indices: Sequence[int]) -> dict[int, float]:
    """Crowding per index within one front; boundary points get infinity."""
    dist = {i: 0.0 for i in indices}
    if not indices:
        return dist
    n_obj = len(vectors[indices[0]].values)
    for k in range(n_obj):
        ordered = sorted(indices, key=lambda i: vectors[i].values[k])
        lo = vectors[ordered[0]].values[k]
        hi = vectors[ordered[-1]].values[k]
        dist[ordered[0]] = math.inf
        dist[ordered[-1]] = math.inf
        if hi == lo:
            continue
        for pos in range(1, len(ordered) - 1):
            i = ordered[pos]
            if dist[i] == math.inf:
                continue
            gap = (vectors[ordered[pos + 1]].values[k]
                   - vectors[ordered[pos - 1]].values[k])
            dist[i] += gap / (hi - lo)
    return dist


# --- search problem ----------------------------------------------------------------

class _Problem:
    def __init__(self, model: FeatureModel, registry: CardRegistry):
        self.model = model
        self.registry = registry
        self.order = model.feature_ids()
        selections = enumerate_valid_configurations(model)
        if not selections:
            raise OptimizerError("model is unsatisfiable")
        self.ml_features = [fid for fid in self.order
                            if model.feature(fid).kind is FeatureKind.ML_BASED]
        model_ids = sorted({mid for (mid, _) in registry.entries})
        self.candidates: dict[str, list[str]] = {fid: model_ids for fid in self.ml_features}
        # ML features with no candidate card can never be bound: restrict the
        # selection space to products that exclude them, or fail if none remain.
        unbindable = [fid for fid in self.ml_features if not self.candidates[fid]]
        if unbindable:
            selections = [s for s in selections
                          if not any(f in s.chosen for f in unbindable)]
            if not selections:
                raise OptimizerError(
                    "no candidate card for required ml feature(s): "
                    + ", ".join(unbindable))
        self.selections = selections
        self.valid_sets = [frozenset(s.chosen) for s in selections]

    # genome = (bit per feature in sorted order) + (index per ml feature)
    def genome_length(self) -> tuple[int, int]:
        return len(self.order), len(self.ml_features)

    def repair(self, genome: Sequence[int]) -> tuple:
        """Greedy propagation-guided repair over the cached valid selections."""
        n = len(self.order)
        compatible = self.valid_sets
        decided: dict[str, bool] = {}
        for i, fid in enumerate(self.order):
            in_all = all(fid in s for s in compatible)
            in_none = all(fid not in s for s in compatible)
            if in_all:
                value = True
            elif in_none:
                value = False
            else:
                value = bool(genome[i])
            decided[fid] = value
            compatible = [s for s in compatible if (fid in s) == value]
        bits = tuple(1 if decided[fid] else 0 for fid in self.order)
        idxs = []
        for j, fid in enumerate(self.ml_features):
            if decided[fid] and self.candidates[fid]:
                idxs.append(genome[n + j] % len(self.candidates[fid]))
            else:
                idxs.append(0)  # normalize genes of unselected ml features
        return bits + tuple(idxs)

    def decode(self, genome: tuple) -> tuple[Selection, dict[str, ComponentReference]]:
        n = len(self.order)
        chosen = frozenset(fid for i, fid in enumerate(self.order) if genome[i])
        bindings: dict[str, ComponentReference] = {}
        for j, fid in enumerate(self.ml_features):
            if fid in chosen:
                mid = self.candidates[fid][genome[n + j]]
                bindings[fid] = ComponentReference(mid, ComponentType.ML_MODEL,
                                                   "selected by optimizer")
        return Selection(chosen), bindings

    def evaluate(self, genome: tuple) -> ObjectiveVector:
        sel, bindings = self.decode(genome)
        return evaluate_objectives(self.model, sel, bindings, self.registry)

    def random_genome(self, rng: random.Random) -> tuple:
        n, k = self.genome_length()
        raw = [rng.randint(0, 1) for _ in range(n)] + \
              [rng.randrange(max(1, len(self.candidates[f]))) for f in self.ml_features]
        return self.repair(raw)


def enumerate_search_space(model: FeatureModel, registry: CardRegistry
                           ) -> list[tuple[Selection, dict, ObjectiveVector]]:
    """Every (selection, binding) pair with its objectives; the oracle space."""
    problem = _Problem(model, registry)
    out = []
    for sel in problem.selections:
        selected_ml = [f for f in problem.ml_features if f in sel.chosen]
        combos: list[dict[str, ComponentReference]] = [{}]
        for fid in selected_ml:
            combos = [dict(c, **{fid: ComponentReference(mid, ComponentType.ML_MODEL,
                                                         "enumerated")})
                      for c in combos for mid in problem.candidates[fid]]
        for bindings in combos:
            vec = evaluate_objectives(model, sel, bindings, registry)
            out.append((sel, bindings, vec))
    return out


def nsga2_optimize(model: FeatureModel, registry: CardRegistry,
                   params: OptimizerParams) -> list[Individual]:
    """Standard elitist NSGA-II; returns the deduplicated rank-0 set."""
    problem = _Problem(model, registry)
    rng = random.Random(params.seed)
    pop = [problem.random_genome(rng) for _ in range(params.population_size)]
    vectors = [problem.evaluate(g) for g in pop]

    n_bits, n_idx = problem.genome_length()
    genome_len = n_bits + n_idx

    def mutate(genome: tuple) -> tuple:
        out = list(genome)
        for i in range(genome_len):
            if rng.random() < params.mutation_rate:
                if i < n_bits:
                    out[i] ^= 1
                else:
                    fid = problem.ml_features[i - n_bits]
                    out[i] = rng.randrange(max(1, len(problem.candidates[fid])))
        return problem.repair(out)

    def crossover(a: tuple, b: tuple) -> tuple[list, list]:
        if rng.random() >= params.crossover_rate:
            return list(a), list(b)
        c1, c2 = [], []
        for x, y in zip(a, b):
            if rng.random() < 0.5:
                c1.append(x)
                c2.append(y)
            else:
                c1.append(y)
                c2.append(x)
        return c1, c2

    for _ in range(params.generations):
        ranks = fast_non_dominated_sort(vectors)
        crowding: dict[int, float] = {}
        for r in set(ranks):
            front = [i for i, rr in enumerate(ranks) if rr == r]
            crowding.update(crowding_distance(vectors, front))

        def better(i: int, j: int) -> int:
            if ranks[i] != ranks[j]:
                return i if ranks[i] < ranks[j] else j
            if crowding[i] != crowding[j]:
                return i if crowding[i] > crowding[j] else j
            return i

        children: list[tuple] = []
        while len(children) < params.population_size:
            p1 = better(rng.randrange(len(pop)), rng.randrange(len(pop)))
            p2 = better(rng.randrange(len(pop)), rng.randrange(len(pop)))
            raw1, raw2 = crossover(pop[p1], pop[p2])
            children.append(mutate(tuple(raw1)))
            children.append(mutate(tuple(raw2)))

        combined = pop + children
        combined_vectors = vectors + [problem.evaluate(g) for g in children]
        combined_ranks = fast_non_dominated_sort(combined_vectors)
        selected: list[int] = []
        for r in sorted(set(combined_ranks)):
            front = [i for i, rr in enumerate(combined_ranks) if rr == r]
            if len(selected) + len(front) <= params.population_size:
                selected.extend(sorted(front))
                continue
            cd = crowding_distance(combined_vectors, front)
            front.sort(key=lambda i: (-cd[i], combined[i]))
            selected.extend(front[:params.population_size - len(selected)])
            break
        pop = [combined[i] for i in selected]
        vectors = [combined_vectors[i] for i in selected]

    final_ranks = fast_non_dominated_sort(vectors)
    result: list[Individual] = []
    seen_genomes = set()
    order = sorted(range(len(pop)), key=lambda i: pop[i])
    for i in order:
        if final_ranks[i] != 0 or pop[i] in seen_genomes:
            continue
        seen_genomes.add(pop[i])
        sel, bindings = problem.decode(pop[i])
        result.append(Individual(sel, bindings, vectors[i], rank=0,
                                 crowding=0.0, genome=pop[i]))
    return result
