import logging
from dataclasses import dataclass
from typing import List, Tuple

from src.orbifold.singular_graph import SingularGraph
from src.words.word import Alphabet, Word, format_word, parse_word, power


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: Tuple[Word, ...]

    def __post_init__(self):
        for r in self.relators:
            if r.alphabet != self.alphabet:
                raise ValueError(f"Relator {r} is over a different alphabet")

    @property
    def num_generators(self) -> int:
        return self.alphabet.size

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    def with_relators(self, relators: List[Word]) -> "Presentation":
        return Presentation(self.alphabet, tuple(relators))

    def to_text(self) -> str:
        lines = [" ".join(self.alphabet.names)] + [format_word(r) or "1" for r in self.relators]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"generators": list(self.alphabet.names), "relators": [format_word(r) or "1" for r in self.relators]}


def parse_presentation(text: str) -> Presentation:
    """First line: generator names. Then one relator per line. '#' starts a comment."""
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ValueError("Presentation has no generator line")
    alphabet = Alphabet(tuple(lines[0].split()))
    return Presentation(alphabet, tuple(parse_word(line, alphabet) for line in lines[1:]))


def presentation_from_dict(data: dict) -> Presentation:
    alphabet = Alphabet(tuple(data["generators"]))
    return Presentation(alphabet, tuple(parse_word(r, alphabet) for r in data.get("relators", [])))


@dataclass(frozen=True)
class Meridian:
    word: Word
    order: int


@dataclass(frozen=True)
class OrbifoldData:
    complement: Presentation
    meridians: Tuple[Meridian, ...]
    singular_graph: SingularGraph

    def consistency_warnings(self) -> List[str]:
        warnings = []
        edge_orders = sorted(e.order for e in self.singular_graph.edges)
        meridian_orders = sorted(m.order for m in self.meridians)
        if edge_orders != meridian_orders:
            warnings.append(f"meridian orders {meridian_orders} do not match singular edge orders {edge_orders}")
        for warning in warnings:
            logging.warning(f"Orbifold data: {warning}")
        return warnings

    @classmethod
    def from_dict(cls, data: dict) -> "OrbifoldData":
        complement = presentation_from_dict(data["presentation"])
        meridians = []
        for m in data.get("meridians", []):
            order = int(m["order"])
            if order < 2:
                raise ValueError(f"Meridian order must be at least 2, got {order}")
            meridians.append(Meridian(parse_word(m["word"], complement.alphabet), order))
        graph = SingularGraph.from_dict(data.get("singular_graph", {}))
        return cls(complement, tuple(meridians), graph)


def meridional_presentation(data: OrbifoldData) -> Presentation:
    """The complement presentation with mu_i^n_i added for every meridian."""
    relators = list(data.complement.relators) + [power(m.word, m.order) for m in data.meridians]
    return data.complement.with_relators(relators)


def deficiency_bound_check(presentation: Presentation, num_sing_components: int) -> bool:
    return presentation.num_relators - presentation.num_generators <= num_sing_components


def reduce_meridional_relators(data: OrbifoldData, p: int) -> Presentation:
    """
    Meridional presentation simplified mod p: mu^n becomes mu when p does not divide n, and is
    dropped when it does. Neither change affects d_p.
    """
    relators = list(data.complement.relators)
    for m in data.meridians:
        if m.order % p != 0:
            relators.append(m.word)
    return data.complement.with_relators(relators)
