from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.perturbation.partition import Partition
from src.utils.io_utils import Number
from src.words.word import Alphabet, Word


class ArithmeticMode(Enum):
    EXACT = 'exact'
    FLOAT = 'float'


class AbstractGroupModel(ABC):
    """
    A group G with a left-invariant metric, a lattice subgroup and the right coset space B of that lattice.

    Points of B are canonical coset representatives, so they can be compared with `==` in exact models.
    Generator images phi(s) are part of the model.
    """
    model_type: str = ''

    def __init__(self, alphabet: Alphabet, generators: List[Any]):
        if len(generators) != alphabet.size:
            raise ValueError(f"Expected {alphabet.size} generator images, got {len(generators)}")
        self.alphabet = alphabet
        self.generators = list(generators)

    @property
    @abstractmethod
    def exact(self) -> bool:
        pass

    @property
    def has_lattice(self) -> bool:
        return True

    # === Group arithmetic ===
    @abstractmethod
    def multiply(self, x, y):
        pass

    @abstractmethod
    def invert(self, x):
        pass

    @abstractmethod
    def identity(self):
        pass

    @abstractmethod
    def distance(self, x, y) -> Number:
        pass

    def within(self, x, y, radius: Number) -> bool:
        return self.distance(x, y) <= radius

    def equal(self, x, y) -> bool:
        return x == y

    def image(self, generator: int, exponent: int):
        g = self.generators[generator]
        return g if exponent == 1 else self.invert(g)

    def evaluate(self, word: Word):
        """phi on a word, as a product of generator images."""
        value = self.identity()
        for letter in word.letters:
            value = self.multiply(value, self.image(letter.generator, letter.exponent))
        return value

    # === Lattice and coset space ===
    @abstractmethod
    def project(self, g):
        """The point of B (right coset of the lattice) containing g."""
        pass

    def coset_act(self, point, g):
        return self.project(self.multiply(point, g))

    def same_coset(self, x, y) -> bool:
        return self.equal(self.project(x), self.project(y))

    @abstractmethod
    def is_in_lattice(self, g) -> bool:
        pass

    @abstractmethod
    def min_lattice_displacement(self) -> Optional[Number]:
        """Smallest d(g, id) over non-identity lattice elements, or None if it cannot be certified."""
        pass

    # === Partitions and measure ===
    @abstractmethod
    def delta_for(self, epsilon: Number) -> Number:
        pass

    @abstractmethod
    def build_cells(self, delta: Number) -> Partition:
        pass

    @abstractmethod
    def locate(self, partition: Partition, point) -> int:
        pass

    @abstractmethod
    def displacement(self, representative, point):
        """A small g with representative * g = point in B."""
        pass

    def exact_transitions(self, partition: Partition, cell_id: int, g) -> Optional[List[Tuple[int, Any]]]:
        """
        Cells met with positive measure by the translate of `cell_id` under g, each with a witness point
        of `cell_id`. None when the model can only find transitions by sampling.
        """
        return None

    def cell_measure(self, partition: Partition, cell_id: int) -> Optional[Number]:
        return None

    def transition_measure(self, partition: Partition, source: int, target: int, g) -> Optional[Number]:
        return None

    # === Sampling ===
    @abstractmethod
    def sample_element(self, rng: np.random.Generator):
        pass

    @abstractmethod
    def sample_point(self, rng: np.random.Generator):
        """A Haar-distributed point of B."""
        pass

    @abstractmethod
    def sample_in_cell(self, partition: Partition, cell_id: int, rng: np.random.Generator):
        pass

    def sample_lattice(self, rng: np.random.Generator):
        return None

    # === Serialization ===
    @abstractmethod
    def element_to_json(self, g) -> Any:
        pass

    @abstractmethod
    def to_config(self) -> Dict[str, Any]:
        pass
