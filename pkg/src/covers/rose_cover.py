import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from src.words.word import Alphabet, Letter, Word, concat, empty_word, enumerate_words, invert, reduce

# An edge of X is named by its source vertex and label: the unique s-edge leaving that vertex.
XEdge = Tuple[int, int]


class NotACoveringError(ValueError):
    pass


@dataclass(frozen=True)
class RoseCover:
    """
    A finite graph with one outgoing and one incoming s-edge at every vertex, for every label s.

    out_perm[s][v] is the target of the s-edge leaving v. Entries may be None only on
    unvalidated instances (see `is_rose_covering`); `from_permutations` rejects them.
    """
    alphabet: Alphabet
    num_vertices: int
    basepoint: int
    out_perm: Tuple[Tuple[Optional[int], ...], ...]
    in_perm: Tuple[Tuple[Optional[int], ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inverse = []
        for targets in self.out_perm:
            back: List[Optional[int]] = [None] * self.num_vertices
            for v, w in enumerate(targets):
                if w is not None and 0 <= w < self.num_vertices and back[w] is None:
                    back[w] = v
            inverse.append(tuple(back))
        object.__setattr__(self, "in_perm", tuple(inverse))

    @classmethod
    def from_permutations(cls, alphabet: Alphabet, out_perm: Sequence[Sequence[int]], basepoint: int = 0) -> "RoseCover":
        cover = cls(alphabet=alphabet, num_vertices=len(out_perm[0]) if out_perm else 0, basepoint=basepoint,
                    out_perm=tuple(tuple(p) for p in out_perm))
        problems = covering_violations(cover)
        if problems:
            raise NotACoveringError(f"Not a rose covering: {'; '.join(problems)}")
        return cover

    @classmethod
    def rose(cls, alphabet: Alphabet) -> "RoseCover":
        return cls.from_permutations(alphabet, [[0] for _ in range(alphabet.size)])

    def step(self, vertex: int, letter: Letter) -> int:
        table = self.out_perm if letter.exponent == 1 else self.in_perm
        target = table[letter.generator][vertex]
        if target is None:
            raise NotACoveringError(f"No {letter} edge at vertex {vertex}")
        return target

    def edges(self) -> List[XEdge]:
        return [(v, s) for s in range(self.alphabet.size) for v in range(self.num_vertices)]

    def to_dict(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "basepoint": self.basepoint,
            "out_perm": {name: list(self.out_perm[s]) for s, name in enumerate(self.alphabet.names)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RoseCover":
        names = tuple(data["out_perm"].keys())
        alphabet = Alphabet(names)
        return cls.from_permutations(alphabet, [data["out_perm"][name] for name in names], int(data["basepoint"]))


@dataclass(frozen=True)
class CoverProjection:
    vertex_map: Tuple[int, ...]
    edge_map: Dict[XEdge, int]

    def fiber_sizes(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        vertex_fibers: Dict[int, int] = {}
        for y in self.vertex_map:
            vertex_fibers[y] = vertex_fibers.get(y, 0) + 1
        edge_fibers: Dict[int, int] = {}
        for y_edge in self.edge_map.values():
            edge_fibers[y_edge] = edge_fibers.get(y_edge, 0) + 1
        return vertex_fibers, edge_fibers


def covering_violations(cover: RoseCover) -> List[str]:
    problems = []
    if cover.num_vertices < 1:
        return ["cover has no vertices"]
    if not 0 <= cover.basepoint < cover.num_vertices:
        problems.append(f"basepoint {cover.basepoint} out of range")
    if len(cover.out_perm) != cover.alphabet.size:
        problems.append(f"expected {cover.alphabet.size} label maps, got {len(cover.out_perm)}")
    for s, targets in enumerate(cover.out_perm):
        label = cover.alphabet.names[s] if s < cover.alphabet.size else str(s)
        if len(targets) != cover.num_vertices:
            problems.append(f"label {label} map has {len(targets)} entries for {cover.num_vertices} vertices")
            continue
        missing = [v for v, w in enumerate(targets) if w is None or not 0 <= w < cover.num_vertices]
        if missing:
            problems.append(f"label {label} has no outgoing edge at vertices {missing}")
        elif len(set(targets)) != cover.num_vertices:
            problems.append(f"label {label} map is not a bijection")
    if not problems and not nx.is_weakly_connected(_as_digraph(cover)):
        problems.append("graph is not connected")
    return problems


def _as_digraph(cover: RoseCover) -> nx.MultiDiGraph:
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(cover.num_vertices))
    for s, targets in enumerate(cover.out_perm):
        for v, w in enumerate(targets):
            if w is not None:
                graph.add_edge(v, w, key=s)
    return graph


def is_rose_covering(cover: RoseCover) -> bool:
    return not covering_violations(cover)


def trace_path(cover: RoseCover, start: int, word: Word) -> Tuple[int, List[Tuple[XEdge, int]]]:
    """Follow `word` from `start`; returns the end vertex and the traversed (edge, exponent) pairs."""
    if not 0 <= start < cover.num_vertices:
        raise ValueError(f"Start vertex {start} is not a vertex of the cover")
    vertex = start
    edges = []
    for letter in word.letters:
        target = cover.step(vertex, letter)
        # traversing backwards uses the edge whose source is the target
        edge = (vertex, letter.generator) if letter.exponent == 1 else (target, letter.generator)
        edges.append((edge, letter.exponent))
        vertex = target
    return vertex, edges


def is_in_subgroup(cover: RoseCover, word: Word) -> bool:
    end, _ = trace_path(cover, cover.basepoint, word)
    return end == cover.basepoint


def _require_covering(cover: RoseCover):
    problems = covering_violations(cover)
    if problems:
        raise NotACoveringError(f"Not a rose covering: {'; '.join(problems)}")


def subgroup_index(cover: RoseCover) -> int:
    _require_covering(cover)
    return cover.num_vertices


def subgroup_rank(cover: RoseCover) -> int:
    _require_covering(cover)
    return cover.num_vertices * (cover.alphabet.size - 1) + 1


def spanning_tree_words(cover: RoseCover) -> Tuple[Dict[int, Word], List[XEdge]]:
    """BFS from the basepoint, generators in index order, out-edges before in-edges."""
    _require_covering(cover)
    alphabet = cover.alphabet
    prefix: Dict[int, Word] = {cover.basepoint: empty_word(alphabet)}
    tree_edges: List[XEdge] = []
    queue = deque([cover.basepoint])
    while queue:
        v = queue.popleft()
        for letter in alphabet.letters():
            w = cover.step(v, letter)
            if w in prefix:
                continue
            prefix[w] = reduce(prefix[v].letters + (letter,), alphabet)
            tree_edges.append((v, letter.generator) if letter.exponent == 1 else (w, letter.generator))
            queue.append(w)
    return prefix, tree_edges


def schreier_basis(cover: RoseCover) -> List[Word]:
    """One free generator of F' per edge outside the BFS spanning tree."""
    prefix, tree_edges = spanning_tree_words(cover)
    tree = set(tree_edges)
    basis = []
    for s in range(cover.alphabet.size):
        for v in range(cover.num_vertices):
            if (v, s) in tree:
                continue
            w = cover.out_perm[s][v]
            loop = concat(reduce(prefix[v].letters + (Letter(s, 1),), cover.alphabet), invert(prefix[w]))
            basis.append(loop)
    logging.debug(f"Schreier basis of size {len(basis)} for a cover with {cover.num_vertices} vertices")
    return basis


def accepted_words(cover: RoseCover, max_len: int) -> List[Word]:
    return [w for w in enumerate_words(cover.alphabet, max_len) if is_in_subgroup(cover, w)]


def to_dot(cover: RoseCover, projection: Optional[CoverProjection] = None) -> str:
    lines = ["digraph X {"]
    for v in range(cover.num_vertices):
        label = f"{v}" if projection is None else f"{v} / {projection.vertex_map[v]}"
        shape = "doublecircle" if v == cover.basepoint else "circle"
        lines.append(f'  {v} [label="{label}", shape={shape}];')
    for s, targets in enumerate(cover.out_perm):
        for v, w in enumerate(targets):
            lines.append(f'  {v} -> {w} [label="{cover.alphabet.names[s]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
