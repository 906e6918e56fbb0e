from dataclasses import dataclass
from typing import AbstractSet, Dict, Iterable, List, Tuple

import networkx as nx

from src.triangulation.triangulation import Triangulation


@dataclass(frozen=True)
class SkeletonGraph:
    """Vertices 0..n-1 and an edge list with multiplicity; loops allowed."""
    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"Edge ({u}, {v}) out of range for {self.num_vertices} vertices")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Tuple[int, int]]) -> "SkeletonGraph":
        return cls(num_vertices, tuple((int(u), int(v)) for u, v in edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "SkeletonGraph":
        index = {node: i for i, node in enumerate(sorted(graph.nodes))}
        return cls(len(index), tuple((index[u], index[v]) for u, v in graph.edges()))

    def valence(self) -> Dict[int, int]:
        valence = {v: 0 for v in range(self.num_vertices)}
        for u, v in self.edges:
            valence[u] += 1
            valence[v] += 1
        return valence

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.num_vertices))
        graph.add_edges_from(self.edges)
        return graph

    def to_dict(self) -> dict:
        valence = self.valence()
        return {"vertices": self.num_vertices, "edges": [list(e) for e in self.edges],
                "valence": [valence[v] for v in range(self.num_vertices)],
                "loops": sum(1 for u, v in self.edges if u == v)}

    def to_dot(self, highlight: AbstractSet[int] = frozenset()) -> str:
        lines = ["graph skeleton {"]
        for v in range(self.num_vertices):
            style = ", style=filled" if v in highlight else ""
            lines.append(f'  v{v} [label="{v}"{style}];')
        for u, v in self.edges:
            lines.append(f"  v{u} -- v{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def one_skeleton(triangulation: Triangulation) -> SkeletonGraph:
    return SkeletonGraph(triangulation.num_vertices, triangulation.edge_endpoints)


def vertex_set(graph: SkeletonGraph, vertices: Iterable[int]) -> frozenset:
    chosen = frozenset(int(v) for v in vertices)
    if not chosen:
        raise ValueError("Vertex set must be nonempty")
    unknown = sorted(v for v in chosen if not 0 <= v < graph.num_vertices)
    if unknown:
        raise ValueError(f"Vertices {unknown} are not in the skeleton")
    return chosen


def boundary_set(graph: SkeletonGraph, vertices: AbstractSet[int]) -> List[int]:
    """Indices of the edges with exactly one endpoint in the set. Loops never qualify."""
    return [i for i, (u, v) in enumerate(graph.edges) if (u in vertices) != (v in vertices)]
