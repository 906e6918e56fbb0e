import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.utils.io_utils import Number, exact_provenance, parse_number, sampled_provenance
from src.weighting.digraph import LabeledDigraph

DEFAULT_SHARDS = 8
STANDARD_ERROR_FACTOR = 5
FLOAT_RELATIVE_TOLERANCE = 1e-9


class UndersamplingError(RuntimeError):
    pass


class InfeasibleWeightingError(ValueError):
    pass


class WeightingMode(Enum):
    EXACT = 'exact'
    MONTE_CARLO = 'monte_carlo'


@dataclass(frozen=True)
class Weighting:
    """Weights on the vertices and edges of Y; edges are keyed by their index in `Y.edges`."""
    vertex_weight: Dict[int, Number]
    edge_weight: Dict[int, Number]
    provenance: Any = "exact"
    standard_error: Optional[Dict[str, Dict[int, float]]] = None

    def is_integral(self) -> bool:
        values = list(self.vertex_weight.values()) + list(self.edge_weight.values())
        return all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in values)

    def total_vertex_weight(self) -> Number:
        return sum(self.vertex_weight.values())

    def total_edge_weight(self) -> Number:
        return sum(self.edge_weight.values())

    def to_dict(self, graph: LabeledDigraph) -> dict:
        edges = []
        for k, e in enumerate(graph.edges):
            edges.append({"src": e.src, "dst": e.dst, "label": graph.alphabet.names[e.label],
                          "weight": self.edge_weight[k]})
        data = {"vertices": {str(v): self.vertex_weight[v] for v in graph.vertices}, "edges": edges,
                "provenance": self.provenance}
        if self.standard_error is not None:
            data["standard_error"] = self.standard_error
        return data

    @classmethod
    def from_dict(cls, data: dict, graph: LabeledDigraph) -> "Weighting":
        vertex_weight = {int(v): parse_number(w) for v, w in data["vertices"].items()}
        edge_weight = {}
        for entry in data["edges"]:
            k = graph.edge_index(int(entry["src"]), int(entry["dst"]), graph.alphabet.index(entry["label"]))
            edge_weight[k] = parse_number(entry["weight"])
        missing = [k for k in range(len(graph.edges)) if k not in edge_weight]
        if missing or set(vertex_weight) != set(graph.vertices):
            raise ValueError("Weighting does not cover every vertex and edge of Y")
        return cls(vertex_weight, edge_weight, data.get("provenance", "exact"))


def _exact_haar(graph: LabeledDigraph, model, partition) -> Weighting:
    vertex_weight = {}
    for v in graph.vertices:
        measure = model.cell_measure(partition, v)
        if measure is None:
            raise ValueError(f"Model type {model.model_type} has no exact cell measure; use Monte-Carlo mode")
        vertex_weight[v] = measure
    edge_weight = {}
    for k, e in enumerate(graph.edges):
        measure = model.transition_measure(partition, e.src, e.dst, model.generators[e.label])
        if measure is None:
            raise ValueError(f"Model type {model.model_type} has no exact transition measure; use Monte-Carlo mode")
        if measure <= 0:
            raise ValueError(f"Edge {e.src}->{e.dst} carries zero measure; Y does not match the partition")
        edge_weight[k] = measure
    return Weighting(vertex_weight, edge_weight, exact_provenance())


def _count_shard(graph: LabeledDigraph, model, partition, samples: int, seed_sequence: np.random.SeedSequence,
                 edge_lookup: Dict[Tuple[int, int, int], int]) -> Tuple[np.ndarray, np.ndarray, int]:
    rng = np.random.default_rng(seed_sequence)
    vertex_counts = np.zeros(len(partition), dtype=np.int64)
    edge_counts = np.zeros(len(graph.edges), dtype=np.int64)
    unseen = 0
    for _ in range(samples):
        point = model.sample_point(rng)
        source = model.locate(partition, point)
        vertex_counts[source] += 1
        for s in range(graph.alphabet.size):
            target = model.locate(partition, model.coset_act(point, model.generators[s]))
            k = edge_lookup.get((source, target, s))
            if k is None:
                unseen += 1
            else:
                edge_counts[k] += 1
    return vertex_counts, edge_counts, unseen


def _monte_carlo_haar(graph: LabeledDigraph, model, partition, samples: int, seed: int,
                      shards: int = DEFAULT_SHARDS) -> Weighting:
    if samples < 1:
        raise ValueError(f"Monte-Carlo sample count must be positive, got {samples}")
    edge_lookup = {(e.src, e.dst, e.label): k for k, e in enumerate(graph.edges)}
    children = np.random.SeedSequence(seed).spawn(shards)
    vertex_counts = np.zeros(len(partition), dtype=np.int64)
    edge_counts = np.zeros(len(graph.edges), dtype=np.int64)
    unseen = 0
    # shards are combined in spawn order so the totals do not depend on scheduling
    for i, child in enumerate(tqdm(children, desc="Haar sampling", disable=None)):
        shard_samples = samples // shards + (1 if i < samples % shards else 0)
        v_counts, e_counts, shard_unseen = _count_shard(graph, model, partition, shard_samples, child, edge_lookup)
        vertex_counts += v_counts
        edge_counts += e_counts
        unseen += shard_unseen
    if unseen:
        logging.warning(f"{unseen} sampled transitions are absent from Y")

    total = Fraction(0)
    for v in graph.vertices:
        measure = model.cell_measure(partition, v)
        if measure is None:
            total = Fraction(1)
            break
        total += Fraction(measure)
    total = float(total)

    def estimate(count) -> Tuple[float, float]:
        p = count / samples
        return total * p, total * math.sqrt(p * (1 - p) / samples)

    vertex_weight, vertex_error = {}, {}
    for v in graph.vertices:
        vertex_weight[v], vertex_error[v] = estimate(int(vertex_counts[v]))
    edge_weight, edge_error = {}, {}
    for k, e in enumerate(graph.edges):
        if edge_counts[k] == 0:
            raise UndersamplingError(f"Edge {e.src}->{e.dst} ({graph.alphabet.names[e.label]}) was never sampled; "
                                     f"increase the sample count above {samples}")
        edge_weight[k], edge_error[k] = estimate(int(edge_counts[k]))
    return Weighting(vertex_weight, edge_weight, sampled_provenance(samples, seed),
                     standard_error={"vertices": vertex_error, "edges": edge_error})


def haar_weighting(graph: LabeledDigraph, model, partition, mode: WeightingMode = WeightingMode.EXACT,
                   samples: int = 100_000, seed: int = 0) -> Weighting:
    """
    Cell measures on the vertices and the measure of {x in B_i : x phi(s) in B_j} on each edge.
    Right-invariance of the measure makes these balanced.
    """
    if mode == WeightingMode.EXACT:
        weighting = _exact_haar(graph, model, partition)
    else:
        weighting = _monte_carlo_haar(graph, model, partition, samples, seed)
    logging.info(f"Haar weighting ({mode.value}): total vertex weight {weighting.total_vertex_weight()}")
    return weighting


def verify_weighting(graph: LabeledDigraph, weighting: Weighting, tolerance: Optional[Number] = None) -> Dict:
    """
    Residual of every balance constraint: for each vertex v, label s and side (out/in), the sum of s-edge
    weights on that side minus w(v). Rational weightings must have zero residuals, float ones a residual within
    FLOAT_RELATIVE_TOLERANCE of the weights involved, and sampled ones a multiple of their standard error,
    unless `tolerance` is given.
    """
    residuals: List[dict] = []
    violations: List[dict] = []
    max_residual = 0
    for (v, s, side), edge_ids in sorted(graph.incidence().items()):
        residual = sum((weighting.edge_weight[k] for k in edge_ids), 0) - weighting.vertex_weight[v]
        if tolerance is not None:
            allowed = tolerance
        elif weighting.standard_error is not None:
            errors = weighting.standard_error
            allowed = STANDARD_ERROR_FACTOR * math.sqrt(
                sum(errors["edges"][k] ** 2 for k in edge_ids) + errors["vertices"][v] ** 2)
        elif isinstance(residual, float):
            scale = max([abs(weighting.vertex_weight[v])] + [abs(weighting.edge_weight[k]) for k in edge_ids])
            allowed = FLOAT_RELATIVE_TOLERANCE * scale
        else:
            allowed = 0
        entry = {"vertex": v, "label": graph.alphabet.names[s], "side": side, "residual": residual}
        residuals.append(entry)
        max_residual = max(max_residual, abs(residual))
        if abs(residual) > allowed:
            violations.append(dict(entry, allowed=allowed))
    nonpositive = sorted([f"vertex {v}" for v, w in weighting.vertex_weight.items() if w <= 0] +
                         [f"edge {k}" for k, w in weighting.edge_weight.items() if w <= 0])
    return {
        "residuals": residuals,
        "max_residual": max_residual,
        "violations": violations,
        "nonpositive": nonpositive,
        "validity": graph.validity_violations(),
        "provenance": weighting.provenance,
    }
