import logging
from collections import deque
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.models.abstract_model import AbstractGroupModel
from src.perturbation.partition import Cell, Partition
from src.utils.io_utils import Number, require_keys
from src.words.word import Alphabet


def _compose_permutations(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    # apply p first, then q
    return tuple(q[i] for i in p)


def _cayley_table(generators: Sequence[Hashable], identity: Hashable, product) -> Tuple[List[Hashable], np.ndarray]:
    """Closure of `generators` under `product`, elements in BFS discovery order from the identity."""
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = product(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    table = np.zeros((len(elements), len(elements)), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[product(x, y)]
    return elements, table


class FiniteModel(AbstractGroupModel):
    """
    A finite group given by its multiplication table, with the discrete metric and counting measure.

    Element 0 is the identity. Points of B are the smallest element index in each right coset.
    """
    model_type = 'finite'

    def __init__(self, alphabet: Alphabet, table: np.ndarray, lattice_generators: Sequence[int],
                 generators: Sequence[int], labels: Optional[List[Any]] = None, config: Optional[dict] = None):
        super().__init__(alphabet, [int(g) for g in generators])
        self.table = np.asarray(table, dtype=np.int64)
        self.order = self.table.shape[0]
        self.labels = list(labels) if labels is not None else list(range(self.order))
        self._config = config or {}
        self.__validate_table()

        self.inverse = [int(np.where(self.table[i] == 0)[0][0]) for i in range(self.order)]
        for g in self.generators + list(lattice_generators):
            if not 0 <= g < self.order:
                raise ValueError(f"Element {g} is not in a group of order {self.order}")

        self.lattice = self.__closure(lattice_generators)
        self.lattice_set = set(self.lattice)
        self.coset_rep = [min(int(self.table[gamma, g]) for gamma in self.lattice) for g in range(self.order)]
        self.coset_reps = sorted(set(self.coset_rep))
        logging.debug(f"Finite model: |G| = {self.order}, |Gamma| = {len(self.lattice)}, |B| = {len(self.coset_reps)}")

    def __validate_table(self):
        n = self.order
        if self.table.shape != (n, n):
            raise ValueError(f"Multiplication table must be square, got shape {self.table.shape}")
        expected = np.arange(n)
        if not (np.array_equal(self.table[0], expected) and np.array_equal(self.table[:, 0], expected)):
            raise ValueError("Element 0 must be the identity of the multiplication table")
        for i in range(n):
            if not (np.array_equal(np.sort(self.table[i]), expected) and np.array_equal(np.sort(self.table[:, i]), expected)):
                raise ValueError("Multiplication table is not a Latin square")

    def __closure(self, generators: Sequence[int]) -> List[int]:
        found = [0]
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in generators:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    found.append(y)
                    queue.append(y)
        return sorted(found)

    @classmethod
    def cyclic(cls, order: int, lattice_generators: Sequence[int], images: Dict[str, int]) -> "FiniteModel":
        if order < 1:
            raise ValueError(f"Cyclic group order must be positive, got {order}")
        table = np.add.outer(np.arange(order), np.arange(order)) % order
        alphabet = Alphabet(tuple(images.keys()))
        config = {"type": cls.model_type, "cyclic": order, "lattice": list(lattice_generators), "images": dict(images)}
        return cls(alphabet, table, [g % order for g in lattice_generators], [images[n] % order for n in alphabet.names],
                   config=config)

    @classmethod
    def from_permutations(cls, lattice_generators: Sequence[Sequence[int]], images: Dict[str, Sequence[int]],
                          extra_generators: Sequence[Sequence[int]] = ()) -> "FiniteModel":
        perms = [tuple(p) for p in lattice_generators] + [tuple(p) for p in images.values()] + \
                [tuple(p) for p in extra_generators]
        degrees = {len(p) for p in perms}
        if len(degrees) != 1:
            raise ValueError(f"All permutations must have the same degree, got {sorted(degrees)}")
        degree = degrees.pop()
        for p in perms:
            if sorted(p) != list(range(degree)):
                raise ValueError(f"Not a permutation of 0..{degree - 1}: {list(p)}")
        elements, table = _cayley_table(perms, tuple(range(degree)), _compose_permutations)
        index = {e: i for i, e in enumerate(elements)}
        alphabet = Alphabet(tuple(images.keys()))
        config = {"type": cls.model_type, "permutations": True,
                  "lattice": [list(p) for p in lattice_generators],
                  "images": {k: list(v) for k, v in images.items()},
                  "extra_generators": [list(p) for p in extra_generators]}
        return cls(alphabet, table, [index[tuple(p)] for p in lattice_generators],
                   [index[tuple(images[n])] for n in alphabet.names], labels=[list(e) for e in elements], config=config)

    @classmethod
    def from_config(cls, config: dict) -> "FiniteModel":
        require_keys(config, ("images",), "Finite model config")
        if "cyclic" in config:
            return cls.cyclic(int(config["cyclic"]), [int(g) for g in config.get("lattice", [])],
                              {k: int(v) for k, v in config["images"].items()})
        if config.get("permutations"):
            return cls.from_permutations(config.get("lattice", []), config["images"], config.get("extra_generators", []))
        raise ValueError("Finite model config needs either 'cyclic' or 'permutations'")

    @property
    def exact(self) -> bool:
        return True

    def multiply(self, x, y):
        return int(self.table[x, y])

    def invert(self, x):
        return self.inverse[x]

    def identity(self):
        return 0

    def distance(self, x, y) -> Number:
        return 0 if x == y else 1

    def project(self, g):
        return self.coset_rep[g]

    def is_in_lattice(self, g) -> bool:
        return g in self.lattice_set

    def min_lattice_displacement(self) -> Optional[Number]:
        return 1 if len(self.lattice) > 1 else None

    def delta_for(self, epsilon: Number) -> Number:
        return Fraction(1, 2)

    def build_cells(self, delta: Number) -> Partition:
        if delta <= 0:
            raise ValueError(f"delta must be positive, got {delta}")
        cells = tuple(Cell(id=k, representative=rep, diameter_bound=0) for k, rep in enumerate(self.coset_reps))
        return Partition(cells=cells, identity_cell=0, delta=delta)

    def locate(self, partition: Partition, point) -> int:
        return self.coset_reps.index(self.project(point))

    def displacement(self, representative, point):
        return self.multiply(self.invert(representative), point)

    def exact_transitions(self, partition: Partition, cell_id: int, g) -> Optional[List[Tuple[int, Any]]]:
        rep = partition.representative(cell_id)
        return [(self.locate(partition, self.coset_act(rep, g)), rep)]

    def cell_measure(self, partition: Partition, cell_id: int) -> Optional[Number]:
        return Fraction(1)

    def transition_measure(self, partition: Partition, source: int, target: int, g) -> Optional[Number]:
        rep = partition.representative(source)
        return Fraction(1) if self.locate(partition, self.coset_act(rep, g)) == target else Fraction(0)

    def sample_element(self, rng: np.random.Generator):
        return int(rng.integers(self.order))

    def sample_point(self, rng: np.random.Generator):
        return self.project(self.sample_element(rng))

    def sample_in_cell(self, partition: Partition, cell_id: int, rng: np.random.Generator):
        return partition.representative(cell_id)

    def sample_lattice(self, rng: np.random.Generator):
        return self.lattice[int(rng.integers(len(self.lattice)))]

    def element_to_json(self, g) -> Any:
        return self.labels[g]

    def to_config(self) -> Dict[str, Any]:
        return dict(self._config) if self._config else {"type": self.model_type, "order": self.order}
