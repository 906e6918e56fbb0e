import itertools
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.abstract_model import AbstractGroupModel, ArithmeticMode
from src.perturbation.partition import Cell, Partition
from src.utils.io_utils import Number, parse_number, require_keys
from src.words.word import Alphabet

MAX_CELLS = 200_000
FLOAT_TOLERANCE = 1e-9
_SAMPLE_BITS = 30


class TorusMetric(Enum):
    SUP = 'sup'
    EUCLIDEAN = 'euclidean'


class TorusTransitions(Enum):
    EXACT = 'exact'
    SAMPLED = 'sampled'


class TorusModel(AbstractGroupModel):
    """
    Translations of R^d modulo the integer lattice. Haar measure on B = R^d / Z^d is volume,
    and the partition is a half-open grid of n^d boxes centred at the points k/n.
    """
    model_type = 'torus'

    def __init__(self, alphabet: Alphabet, generators: Sequence[Sequence[Any]], dimension: int,
                 mode: ArithmeticMode = ArithmeticMode.EXACT, metric: TorusMetric = TorusMetric.SUP,
                 transitions: TorusTransitions = TorusTransitions.EXACT):
        if dimension < 1:
            raise ValueError(f"Torus dimension must be positive, got {dimension}")
        self.dimension = dimension
        self.mode = mode
        self.metric = metric
        self.transitions = transitions
        vectors = []
        for vector in generators:
            if len(vector) != dimension:
                raise ValueError(f"Generator image {list(vector)} does not have dimension {dimension}")
            vectors.append(tuple(self.coerce(x) for x in vector))
        super().__init__(alphabet, vectors)

    @classmethod
    def from_config(cls, config: dict) -> "TorusModel":
        require_keys(config, ("images",), "Torus model config")
        images = config["images"]
        if not isinstance(images, dict) or not images:
            raise ValueError("Torus model config needs a non-empty object of generator images")
        alphabet = Alphabet(tuple(images.keys()))
        dimension = int(config.get("dimension", len(next(iter(images.values())))))
        return cls(alphabet, [images[name] for name in alphabet.names], dimension,
                   mode=ArithmeticMode(config.get("mode", ArithmeticMode.EXACT.value)),
                   metric=TorusMetric(config.get("metric", TorusMetric.SUP.value)),
                   transitions=TorusTransitions(config.get("transitions", TorusTransitions.EXACT.value)))

    def coerce(self, x) -> Number:
        if self.mode == ArithmeticMode.FLOAT:
            return float(parse_number(x))
        value = parse_number(x)
        # floats from JSON are read by their decimal spelling, so 0.3 means 3/10
        return Fraction(repr(value)) if isinstance(value, float) else Fraction(value)

    @property
    def exact(self) -> bool:
        return self.mode == ArithmeticMode.EXACT

    def _half(self) -> Number:
        return Fraction(1, 2) if self.exact else 0.5

    def multiply(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def invert(self, x):
        return tuple(-a for a in x)

    def identity(self):
        return tuple(self.coerce(0) for _ in range(self.dimension))

    def _squared_norm(self, v) -> Number:
        return sum(a * a for a in v)

    def distance(self, x, y) -> Number:
        """
        Euclidean distances of exact models are Fractions when the squared norm is a rational square and floats
        otherwise; `within` compares squared norms and stays exact either way.
        """
        diff = [b - a for a, b in zip(x, y)]
        if self.metric == TorusMetric.SUP:
            return max(abs(a) for a in diff)
        squared = self._squared_norm(diff)
        if self.exact:
            squared = Fraction(squared)
            num, den = math.isqrt(squared.numerator), math.isqrt(squared.denominator)
            if num * num == squared.numerator and den * den == squared.denominator:
                return Fraction(num, den)
        return math.sqrt(squared)

    def within(self, x, y, radius: Number) -> bool:
        if self.metric == TorusMetric.SUP:
            return self.distance(x, y) <= radius
        diff = [b - a for a, b in zip(x, y)]
        return self._squared_norm(diff) <= radius * radius

    def equal(self, x, y) -> bool:
        if self.exact:
            return tuple(x) == tuple(y)
        return all(abs(a - b) <= FLOAT_TOLERANCE for a, b in zip(x, y))

    def _mod_one(self, a: Number) -> Number:
        r = a % 1
        if not self.exact and r >= 1.0 - FLOAT_TOLERANCE:
            return 0.0
        return r

    def project(self, g):
        return tuple(self._mod_one(a) for a in g)

    def same_coset(self, x, y) -> bool:
        diff = [self._mod_one(b - a) for a, b in zip(x, y)]
        if self.exact:
            return all(d == 0 for d in diff)
        return all(min(d, 1 - d) <= FLOAT_TOLERANCE for d in diff)

    def is_in_lattice(self, g) -> bool:
        if self.exact:
            return all(Fraction(a).denominator == 1 for a in g)
        return all(abs(a - round(a)) <= FLOAT_TOLERANCE for a in g)

    def min_lattice_displacement(self) -> Optional[Number]:
        return 1

    def delta_for(self, epsilon: Number) -> Number:
        # d(g1 + t + g2, t) = |g1 + g2| <= 2 delta for translations
        return self.coerce(epsilon) / 2

    def grid_size(self, delta: Number) -> int:
        if delta <= 0:
            raise ValueError(f"delta must be positive, got {delta}")
        if self.metric == TorusMetric.SUP:
            return math.ceil(1 / delta)
        # smallest n with d / n^2 <= delta^2
        n = max(1, math.ceil(math.sqrt(self.dimension) / float(delta)))
        while self.dimension > delta * delta * n * n:
            n += 1
        while n > 1 and self.dimension <= delta * delta * (n - 1) * (n - 1):
            n -= 1
        return n

    def build_cells(self, delta: Number) -> Partition:
        delta = self.coerce(delta)
        n = self.grid_size(delta)
        if n ** self.dimension > MAX_CELLS:
            raise ValueError(f"A grid of {n}^{self.dimension} cells is too fine for delta {delta}")
        if self.metric == TorusMetric.SUP:
            diameter = Fraction(1, n) if self.exact else 1.0 / n
        else:
            # certified above by the exact comparison in grid_size
            diameter = delta
        cells = []
        for k, index in enumerate(itertools.product(range(n), repeat=self.dimension)):
            rep = tuple(Fraction(i, n) if self.exact else i / n for i in index)
            cells.append(Cell(id=k, representative=rep, diameter_bound=diameter))
        logging.debug(f"Torus grid: n = {n}, {len(cells)} cells")
        return Partition(cells=tuple(cells), identity_cell=0, delta=delta, resolution=n)

    def _cell_id(self, index: Sequence[int], n: int) -> int:
        k = 0
        for i in index:
            k = k * n + i
        return k

    def _grid_index(self, point, n: int) -> Tuple[int, ...]:
        return tuple(math.floor(a * n + self._half()) % n for a in self.project(point))

    def locate(self, partition: Partition, point) -> int:
        return self._cell_id(self._grid_index(point, partition.resolution), partition.resolution)

    def displacement(self, representative, point):
        half = self._half()
        return tuple(((b - a + half) % 1) - half for a, b in zip(representative, point))

    def _exact_value(self, a: Number) -> Fraction:
        # float coordinates are read by their shortest decimal spelling, as coerce does for exact models
        return Fraction(repr(a)) if isinstance(a, float) else Fraction(a)

    def _coordinate_transitions(self, index: int, shift: Number, n: int) -> Dict[int, Tuple[Number, Number]]:
        """
        For one coordinate: grid index -> (witness coordinate, overlap length) for the cells met by the
        shifted interval [k/n - h, k/n + h) + shift with positive length. The overlaps are computed in rational
        arithmetic for both modes; float models drop overlaps below FLOAT_TOLERANCE / n and return floats.
        """
        h = Fraction(1, 2 * n)
        exact_shift = self._exact_value(shift)
        u = Fraction(index, n) + exact_shift
        found: Dict[int, Tuple[Fraction, Fraction]] = {}
        for lifted in sorted({math.floor(u * n), math.ceil(u * n)}):
            target = Fraction(lifted, n)
            overlap = Fraction(1, n) - abs(target - u)
            if overlap <= 0 or (not self.exact and overlap * n <= FLOAT_TOLERANCE):
                continue
            lo = max(u - h, target - h)
            hi = min(u + h, target + h)
            witness = (lo + hi) / 2 - exact_shift
            key = lifted % n
            if key in found:
                found[key] = (found[key][0], found[key][1] + overlap)
            else:
                found[key] = (witness, overlap)
        if self.exact:
            return found
        return {key: (float(witness), float(overlap)) for key, (witness, overlap) in found.items()}

    def _transitions(self, partition: Partition, cell_id: int, g) -> List[Tuple[int, Any, Number]]:
        n = partition.resolution
        index = self._grid_index(partition.representative(cell_id), n)
        per_coordinate = [self._coordinate_transitions(k, t, n) for k, t in zip(index, g)]
        result = []
        for choice in itertools.product(*[sorted(table.items()) for table in per_coordinate]):
            target = tuple(k for k, _ in choice)
            witness = tuple(w for _, (w, _) in choice)
            measure = Fraction(1) if self.exact else 1.0
            for _, (_, overlap) in choice:
                measure = measure * overlap
            result.append((self._cell_id(target, n), witness, measure))
        return result

    def exact_transitions(self, partition: Partition, cell_id: int, g) -> Optional[List[Tuple[int, Any]]]:
        if self.transitions == TorusTransitions.SAMPLED:
            return None
        return [(target, witness) for target, witness, _ in self._transitions(partition, cell_id, g)]

    def cell_measure(self, partition: Partition, cell_id: int) -> Optional[Number]:
        n = partition.resolution
        return Fraction(1, n ** self.dimension) if self.exact else 1.0 / n ** self.dimension

    def transition_measure(self, partition: Partition, source: int, target: int, g) -> Optional[Number]:
        for cell, _, measure in self._transitions(partition, source, g):
            if cell == target:
                return measure
        return Fraction(0) if self.exact else 0.0

    def _uniform(self, rng: np.random.Generator) -> Number:
        if self.exact:
            return Fraction(int(rng.integers(0, 2 ** _SAMPLE_BITS)), 2 ** _SAMPLE_BITS)
        return float(rng.random())

    def sample_element(self, rng: np.random.Generator):
        return tuple(4 * self._uniform(rng) - 2 for _ in range(self.dimension))

    def sample_point(self, rng: np.random.Generator):
        return tuple(self._uniform(rng) for _ in range(self.dimension))

    def sample_in_cell(self, partition: Partition, cell_id: int, rng: np.random.Generator):
        n = partition.resolution
        rep = partition.representative(cell_id)
        return self.project(tuple(c + (self._uniform(rng) - self._half()) / n for c in rep))

    def sample_lattice(self, rng: np.random.Generator):
        return tuple(self.coerce(int(k)) for k in rng.integers(-3, 4, size=self.dimension))

    def element_to_json(self, g) -> Any:
        return list(g)

    def to_config(self) -> Dict[str, Any]:
        return {
            "type": self.model_type,
            "dimension": self.dimension,
            "mode": self.mode.value,
            "metric": self.metric.value,
            "transitions": self.transitions.value,
            "images": {name: list(self.generators[s]) for s, name in enumerate(self.alphabet.names)},
        }
