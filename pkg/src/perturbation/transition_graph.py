import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from src.perturbation.partition import Partition
from src.utils.io_utils import Number
from src.weighting.digraph import LabeledDigraph, YEdge
from src.weighting.weighting import UndersamplingError


@dataclass
class PsiAssignment:
    psi: Dict[int, Any]
    max_distance: Number = 0
    violations: List[str] = field(default_factory=list)


def build_Y(model, partition: Partition, samples_per_cell: int = 64, seed: int = 0) -> LabeledDigraph:
    """
    Join cell i to cell j by an s-edge when some interior point of cell i is carried into cell j by phi(s).
    Models with exact transitions enumerate them; others sample `samples_per_cell` points per cell and label.
    """
    if samples_per_cell < 1:
        raise ValueError(f"samples per cell must be positive, got {samples_per_cell}")
    rng = np.random.default_rng(seed)
    found: Dict[tuple, Any] = {}
    sampled = False
    for s in range(model.alphabet.size):
        g = model.generators[s]
        for cell in partition.cells:
            transitions = model.exact_transitions(partition, cell.id, g)
            if transitions is None:
                sampled = True
                transitions = []
                for _ in range(samples_per_cell):
                    point = model.sample_in_cell(partition, cell.id, rng)
                    transitions.append((model.locate(partition, model.coset_act(point, g)), point))
            for target, witness in transitions:
                found.setdefault((s, cell.id, target), witness)

    edges = tuple(YEdge(src=i, dst=j, label=s, witness=found[(s, i, j)]) for s, i, j in sorted(found))
    graph = LabeledDigraph(alphabet=model.alphabet, vertices=tuple(c.id for c in partition.cells), edges=edges)
    violations = graph.validity_violations()
    if violations:
        message = f"Y is missing edges: {'; '.join(violations[:5])}"
        if sampled:
            raise UndersamplingError(f"{message}; increase samples per cell above {samples_per_cell}")
        raise ValueError(message)
    logging.info(f"Built Y with {len(graph.vertices)} vertices and {len(graph.edges)} edges"
                 f"{' (sampled)' if sampled else ''}")
    return graph


def assign_psi(model, partition: Partition, graph: LabeledDigraph, epsilon: Number) -> PsiAssignment:
    """
    For an s-edge i -> j with witness b'_i: write b'_i = beta_i g_i and b'_i phi(s) = beta_j g_j,
    and set psi(e) = g_i phi(s) g_j^-1, so that beta_i psi(e) = beta_j.
    """
    assignment = PsiAssignment(psi={})
    for k, e in enumerate(graph.edges):
        if e.witness is None:
            raise ValueError(f"Edge {e.src}->{e.dst} has no witness point")
        phi_s = model.generators[e.label]
        beta_i = partition.representative(e.src)
        beta_j = partition.representative(e.dst)
        g_i = model.displacement(beta_i, e.witness)
        landed = model.coset_act(e.witness, phi_s)
        if model.locate(partition, landed) != e.dst:
            raise ValueError(f"Witness of edge {e.src}->{e.dst} lands in cell {model.locate(partition, landed)}")
        g_j = model.displacement(beta_j, landed)
        psi = model.multiply(model.multiply(g_i, phi_s), model.invert(g_j))
        assignment.psi[k] = psi

        name = graph.alphabet.names[e.label]
        if not model.same_coset(model.multiply(beta_i, psi), beta_j):
            assignment.violations.append(f"edge {k} ({name}: {e.src}->{e.dst}): beta_i psi != beta_j")
        forward = model.distance(psi, phi_s)
        backward = model.distance(model.invert(psi), model.invert(phi_s))
        assignment.max_distance = max(assignment.max_distance, forward, backward)
        if not model.within(psi, phi_s, epsilon) or not model.within(model.invert(psi), model.invert(phi_s), epsilon):
            assignment.violations.append(f"edge {k} ({name}: {e.src}->{e.dst}): psi is {forward} from phi(s)")
    if assignment.violations:
        logging.warning(f"{len(assignment.violations)} psi assignments violate their invariants")
    logging.info(f"Assigned psi on {len(assignment.psi)} edges, max distance to phi {assignment.max_distance}")
    return assignment
