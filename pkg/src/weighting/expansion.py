import logging
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np

from src.covers.rose_cover import CoverProjection, RoseCover, XEdge
from src.weighting.digraph import LabeledDigraph
from src.weighting.weighting import Weighting


def _check_integer_weighting(graph: LabeledDigraph, weighting: Weighting):
    if not weighting.is_integral():
        raise ValueError("Cover expansion needs an integer weighting")
    for v, w in weighting.vertex_weight.items():
        if w < 1:
            raise ValueError(f"Vertex {v} has non-positive weight {w}")
    for k, w in weighting.edge_weight.items():
        if w < 1:
            raise ValueError(f"Edge {k} has non-positive weight {w}")
    for (v, s, side), edge_ids in graph.incidence().items():
        if sum(weighting.edge_weight[k] for k in edge_ids) != weighting.vertex_weight[v]:
            raise ValueError(f"Weighting is not balanced at vertex {v}, label {graph.alphabet.names[s]} ({side})")


def expand_cover(graph: LabeledDigraph, weighting: Weighting, seed: int,
                 base_vertex: int = 0) -> Tuple[RoseCover, CoverProjection]:
    """
    Blow each vertex v of Y up to w'(v) vertices and each edge e to w'(e) edges, matching edge copies to
    fiber vertices by seeded random bijections. Only the component of the basepoint, the first vertex over
    `base_vertex`, is kept.
    """
    _check_integer_weighting(graph, weighting)
    if base_vertex not in graph.vertices:
        raise ValueError(f"Base vertex {base_vertex} is not a vertex of Y")
    rng = np.random.default_rng(seed)

    fiber: Dict[int, List[int]] = {}
    vertex_map: List[int] = []
    for v in graph.vertices:
        size = int(weighting.vertex_weight[v])
        fiber[v] = list(range(len(vertex_map), len(vertex_map) + size))
        vertex_map.extend([v] * size)
    total = len(vertex_map)

    out_perm = [[-1] * total for _ in range(graph.alphabet.size)]
    edge_of: Dict[XEdge, int] = {}
    incidence = graph.incidence()
    for s in range(graph.alphabet.size):
        sources: Dict[int, List[int]] = {}
        targets: Dict[int, List[int]] = {}
        for v in graph.vertices:
            for side, assigned in (("out", sources), ("in", targets)):
                shuffled = [fiber[v][i] for i in rng.permutation(len(fiber[v]))]
                offset = 0
                for k in incidence[(v, s, side)]:
                    copies = int(weighting.edge_weight[k])
                    assigned.setdefault(k, []).extend(shuffled[offset:offset + copies])
                    offset += copies
        for k in sorted(sources):
            for x, y in zip(sources[k], targets[k]):
                out_perm[s][x] = y
                edge_of[(x, s)] = k

    graph_x = nx.MultiGraph()
    graph_x.add_nodes_from(range(total))
    for s, targets_s in enumerate(out_perm):
        graph_x.add_edges_from((x, y) for x, y in enumerate(targets_s))
    basepoint = fiber[base_vertex][0]
    component = sorted(nx.node_connected_component(graph_x, basepoint))
    if len(component) < total:
        logging.info(f"Discarded {total - len(component)} of {total} vertices outside the basepoint component")

    relabel = {old: new for new, old in enumerate(component)}
    cover = RoseCover.from_permutations(
        graph.alphabet,
        [[relabel[out_perm[s][old]] for old in component] for s in range(graph.alphabet.size)],
        basepoint=relabel[basepoint],
    )
    projection = CoverProjection(
        vertex_map=tuple(vertex_map[old] for old in component),
        edge_map={(relabel[old], s): edge_of[(old, s)] for old in component for s in range(graph.alphabet.size)},
    )
    logging.info(f"Expanded Y to a cover with {cover.num_vertices} vertices (index of F' = {cover.num_vertices})")
    return cover, projection
