import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx


class LocalGroup(Enum):
    CYCLIC = 'cyclic'
    DIHEDRAL = 'dihedral'
    Z2XZ2 = 'z2xz2'
    A4 = 'a4'
    S4 = 's4'
    A5 = 'a5'


@dataclass(frozen=True)
class SingularVertex:
    id: int
    local_group: LocalGroup = LocalGroup.CYCLIC
    # dihedral(2n) and cyclic(n) carry n
    n: Optional[int] = None


@dataclass(frozen=True)
class SingularEdge:
    # None for a closed curve with no vertices on it
    ends: Optional[Tuple[int, int]]
    order: int

    @property
    def is_closed_curve(self) -> bool:
        return self.ends is None


@dataclass(frozen=True)
class SingularGraph:
    """The codimension-2 singular locus: arcs and circles labelled by their orders, meeting at vertices."""
    vertices: Tuple[SingularVertex, ...]
    edges: Tuple[SingularEdge, ...]

    def __post_init__(self):
        ids = {v.id for v in self.vertices}
        if len(ids) != len(self.vertices):
            raise ValueError("Duplicate vertex ids in singular graph")
        for e in self.edges:
            if e.order < 2:
                raise ValueError(f"Edge order must be at least 2, got {e.order}")
            if e.ends is not None and not set(e.ends) <= ids:
                raise ValueError(f"Edge {e.ends} references an unknown vertex")

    def valence(self) -> Dict[int, int]:
        valence = {v.id: 0 for v in self.vertices}
        for e in self.edges:
            if e.ends is not None:
                # a loop meets its vertex twice
                valence[e.ends[0]] += 1
                valence[e.ends[1]] += 1
        return valence

    def incident_orders(self, vertex: int) -> List[int]:
        orders = []
        for e in self.edges:
            if e.ends is not None:
                orders.extend([e.order] * list(e.ends).count(vertex))
        return sorted(orders)

    def closed_curves(self) -> int:
        return sum(1 for e in self.edges if e.is_closed_curve)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(v.id for v in self.vertices)
        graph.add_edges_from(e.ends for e in self.edges if e.ends is not None)
        return graph

    def to_dict(self) -> dict:
        vertices = []
        for v in self.vertices:
            entry = {"id": v.id, "local_group": v.local_group.value}
            if v.n is not None:
                entry["n"] = v.n
            vertices.append(entry)
        return {"vertices": vertices,
                "edges": [{"ends": None if e.ends is None else list(e.ends), "order": e.order} for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "SingularGraph":
        vertices = tuple(SingularVertex(int(v["id"]), LocalGroup(v.get("local_group", "cyclic")),
                                        None if v.get("n") is None else int(v["n"]))
                         for v in data.get("vertices", []))
        edges = tuple(SingularEdge(None if e.get("ends") is None else (int(e["ends"][0]), int(e["ends"][1])),
                                   int(e["order"]))
                      for e in data.get("edges", []))
        return cls(vertices, edges)


def _expected_orders(vertex: SingularVertex) -> Optional[List[int]]:
    if vertex.local_group == LocalGroup.DIHEDRAL:
        return sorted([2, 2, vertex.n]) if vertex.n is not None else None
    return {
        LocalGroup.Z2XZ2: [2, 2, 2],
        LocalGroup.A4: [2, 3, 3],
        LocalGroup.S4: [2, 3, 4],
        LocalGroup.A5: [2, 3, 5],
    }.get(vertex.local_group)


def validate_singular_graph(graph: SingularGraph) -> List[str]:
    """Vertices with non-cyclic local group must be trivalent with the edge orders their group dictates."""
    warnings = []
    valence = graph.valence()
    for v in graph.vertices:
        if v.local_group == LocalGroup.CYCLIC:
            continue
        if valence[v.id] != 3:
            warnings.append(f"vertex {v.id} ({v.local_group.value}) has valence {valence[v.id]}, expected 3")
            continue
        expected = _expected_orders(v)
        actual = graph.incident_orders(v.id)
        if expected is not None and actual != expected:
            warnings.append(f"vertex {v.id} ({v.local_group.value}) has edge orders {actual}, expected {expected}")
    for warning in warnings:
        logging.warning(f"Singular graph: {warning}")
    return warnings


def sing_p_extract(graph: SingularGraph, p: int) -> SingularGraph:
    """Edges whose order is a multiple of p, together with their endpoints."""
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    edges = tuple(e for e in graph.edges if e.order % p == 0)
    used = {x for e in edges if e.ends is not None for x in e.ends}
    vertices = tuple(v for v in graph.vertices if v.id in used)
    return SingularGraph(vertices, edges)


def graph_b1(graph: SingularGraph) -> int:
    nx_graph = graph.to_networkx()
    return (nx_graph.number_of_edges() - nx_graph.number_of_nodes()
            + nx.number_connected_components(nx_graph) + graph.closed_curves())


def chi_lower_bound(graph: SingularGraph) -> Fraction:
    """Sum over vertices of val(v)/2 - 1, which is minus the Euler characteristic of the non-circle part."""
    return sum((Fraction(val, 2) - 1 for val in graph.valence().values()), Fraction(0))


def non_circle_components(graph: SingularGraph) -> int:
    return nx.number_connected_components(graph.to_networkx())
