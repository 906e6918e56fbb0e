from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from src.covers.rose_cover import CoverProjection, RoseCover, XEdge
from src.perturbation.partition import Partition
from src.utils.io_utils import Number
from src.weighting.digraph import LabeledDigraph
from src.weighting.weighting import Weighting
from src.words.word import Letter, Word, reduce


@dataclass
class PerturbationResult:
    model: Any
    epsilon: Number
    delta: Number
    partition: Optional[Partition]
    graph: LabeledDigraph
    psi: Dict[int, Any]
    weighting: Weighting
    cover: RoseCover
    projection: CoverProjection
    haar: Optional[Weighting] = None
    report: Dict[str, Any] = field(default_factory=dict)
    # psi(h(e)) and its inverse for every edge e of X
    edge_values: Dict[XEdge, Tuple[Any, Any]] = field(init=False, repr=False)

    def __post_init__(self):
        self.edge_values = {}
        for edge, y_edge in self.projection.edge_map.items():
            value = self.psi[y_edge]
            self.edge_values[edge] = (value, self.model.invert(value))

    @property
    def index(self) -> int:
        return self.cover.num_vertices

    def step(self, vertex: int, code: int) -> Tuple[int, Any]:
        """Cross one letter (by code) from `vertex`; returns the new vertex and psi(h(e))^k."""
        generator, inverse = code >> 1, code & 1
        if not inverse:
            return self.cover.out_perm[generator][vertex], self.edge_values[(vertex, generator)][0]
        source = self.cover.in_perm[generator][vertex]
        return source, self.edge_values[(source, generator)][1]

    def evaluate_codes(self, codes: Sequence[int], start: Optional[int] = None,
                       value: Any = None) -> Tuple[int, Any]:
        """Product of psi along the path spelled by `codes`, without reducing them first."""
        vertex = self.cover.basepoint if start is None else start
        value = self.model.identity() if value is None else value
        for code in codes:
            vertex, factor = self.step(vertex, code)
            value = self.model.multiply(value, factor)
        return vertex, value


def phi_epsilon(result: PerturbationResult, word: Union[Word, Sequence[Letter]]):
    """psi(h(e_1))^k_1 ... psi(h(e_n))^k_n along the path of the reduced word from the basepoint."""
    if not isinstance(word, Word):
        word = reduce(list(word), result.cover.alphabet)
    return result.evaluate_codes(word.codes())[1]


def path_product(result: PerturbationResult, letters: Sequence[Letter]):
    """The same product taken along the unreduced spelling."""
    return result.evaluate_codes([letter.code for letter in letters])[1]
