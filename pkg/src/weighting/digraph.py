from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from src.words.word import Alphabet


@dataclass(frozen=True)
class YEdge:
    src: int
    dst: int
    label: int
    # a point of the source cell whose translate lands in the target cell, when known
    witness: Optional[Any] = None


@dataclass(frozen=True)
class LabeledDigraph:
    """
    The transition graph Y: one vertex per partition cell, an s-labelled edge i -> j
    whenever some point of cell i is carried into cell j by the image of s.
    """
    alphabet: Alphabet
    vertices: Tuple[int, ...]
    edges: Tuple[YEdge, ...]

    def __post_init__(self):
        vertex_set = set(self.vertices)
        if len(vertex_set) != len(self.vertices):
            raise ValueError("Duplicate vertex ids in labelled digraph")
        seen = set()
        for e in self.edges:
            if e.src not in vertex_set or e.dst not in vertex_set:
                raise ValueError(f"Edge {e.src}->{e.dst} references an unknown vertex")
            if not 0 <= e.label < self.alphabet.size:
                raise ValueError(f"Edge label {e.label} out of range for alphabet {self.alphabet.names}")
            key = (e.src, e.dst, e.label)
            if key in seen:
                raise ValueError(f"Duplicate edge {self.alphabet.names[e.label]}: {e.src}->{e.dst}")
            seen.add(key)

    def out_edges(self, vertex: int, label: int) -> List[int]:
        return [k for k, e in enumerate(self.edges) if e.src == vertex and e.label == label]

    def in_edges(self, vertex: int, label: int) -> List[int]:
        return [k for k, e in enumerate(self.edges) if e.dst == vertex and e.label == label]

    def incidence(self) -> Dict[Tuple[int, int, str], List[int]]:
        """(vertex, label, "out"|"in") -> edge indices, for every vertex and label."""
        table = {(v, s, side): [] for v in self.vertices for s in range(self.alphabet.size) for side in ("out", "in")}
        for k, e in enumerate(self.edges):
            table[(e.src, e.label, "out")].append(k)
            table[(e.dst, e.label, "in")].append(k)
        return table

    def validity_violations(self) -> List[str]:
        problems = []
        for (v, s, side), edge_ids in self.incidence().items():
            if not edge_ids:
                direction = "outgoing" if side == "out" else "incoming"
                problems.append(f"vertex {v} has no {direction} {self.alphabet.names[s]}-edge")
        return problems

    def edge_index(self, src: int, dst: int, label: int) -> int:
        for k, e in enumerate(self.edges):
            if (e.src, e.dst, e.label) == (src, dst, label):
                return k
        raise ValueError(f"No {self.alphabet.names[label]}-edge {src}->{dst} in Y")

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for k, e in enumerate(self.edges):
            graph.add_edge(e.src, e.dst, key=k, label=self.alphabet.names[e.label])
        return graph

    def to_dict(self) -> dict:
        return {
            "generators": list(self.alphabet.names),
            "vertices": list(self.vertices),
            "edges": [{"src": e.src, "dst": e.dst, "label": self.alphabet.names[e.label]} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledDigraph":
        alphabet = Alphabet(tuple(data["generators"]))
        edges = tuple(YEdge(int(e["src"]), int(e["dst"]), alphabet.index(e["label"])) for e in data["edges"])
        return cls(alphabet=alphabet, vertices=tuple(int(v) for v in data["vertices"]), edges=edges)

    def to_dot(self, weights: Optional[Dict[str, Dict[int, Any]]] = None) -> str:
        lines = ["digraph Y {"]
        for v in self.vertices:
            label = str(v) if weights is None else f"{v} ({weights['vertices'][v]})"
            lines.append(f'  {v} [label="{label}"];')
        for k, e in enumerate(self.edges):
            label = self.alphabet.names[e.label]
            if weights is not None:
                label += f" ({weights['edges'][k]})"
            lines.append(f'  {e.src} -> {e.dst} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
