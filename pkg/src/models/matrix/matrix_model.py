import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.models.abstract_model import AbstractGroupModel
from src.perturbation.partition import Partition
from src.utils.io_utils import Number, require_keys
from src.words.word import Alphabet

TOLERANCE = 1e-9
IDENTITY = np.eye(2, dtype=complex)


def canonical_sign(m: np.ndarray) -> np.ndarray:
    """Representative of ±m whose first non-negligible entry has positive real part (or positive imaginary part)."""
    for x in m.flatten():
        if abs(x) > TOLERANCE:
            if abs(x.real) > TOLERANCE:
                return m if x.real > 0 else -m
            return m if x.imag > 0 else -m
    return m


def normalize_determinant(m: np.ndarray) -> np.ndarray:
    det = np.linalg.det(m)
    if abs(det) < TOLERANCE:
        raise ValueError("Matrix is singular")
    return canonical_sign(m / np.sqrt(det))


def parse_matrix(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    """[[a, b], [c, d]] with each entry a number or a [re, im] pair."""
    entries = []
    for row in rows:
        for x in row:
            entries.append(complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x))
    if len(entries) != 4:
        raise ValueError(f"Expected a 2x2 matrix, got {rows}")
    return np.array(entries, dtype=complex).reshape(2, 2)


def schottky_generators(rank: int, translation_length: float) -> List[np.ndarray]:
    """Hyperbolic elements with axes rotated apart; long translation lengths give disjoint isometric circles."""
    if rank < 1:
        raise ValueError(f"Schottky rank must be positive, got {rank}")
    half = translation_length / 2
    hyperbolic = np.array([[math.cosh(half), math.sinh(half)], [math.sinh(half), math.cosh(half)]], dtype=complex)
    generators = []
    for k in range(rank):
        theta = math.pi * k / (2 * rank)
        rotation = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]], dtype=complex)
        generators.append(canonical_sign(rotation @ hyperbolic @ np.linalg.inv(rotation)))
    return generators


class MatrixModel(AbstractGroupModel):
    """
    2x2 complex matrices of determinant 1 modulo sign, with d(g, h) = min over signs of ||g^-1 h -/+ I||_F.

    No lattice is modelled: only generator arithmetic and defect measurement are available.
    """
    model_type = 'matrix'

    def __init__(self, alphabet: Alphabet, generators: Sequence[np.ndarray], twist: Optional[np.ndarray] = None):
        super().__init__(alphabet, [normalize_determinant(np.asarray(g, dtype=complex)) for g in generators])
        self.twist = None if twist is None else normalize_determinant(np.asarray(twist, dtype=complex))

    @classmethod
    def from_config(cls, config: dict) -> "MatrixModel":
        if "schottky" in config:
            schottky = config["schottky"]
            require_keys(schottky, ("rank",), "Schottky config")
            rank = int(schottky["rank"])
            alphabet = Alphabet.of_size(rank)
            model = cls(alphabet, schottky_generators(rank, float(schottky.get("translation_length", 4.0))))
        else:
            require_keys(config, ("images",), "Matrix model config")
            images = config["images"]
            alphabet = Alphabet(tuple(images.keys()))
            model = cls(alphabet, [parse_matrix(images[name]) for name in alphabet.names])
        if config.get("twist") is not None:
            model = model.with_metric_twist(parse_matrix(config["twist"]))
        return model

    def with_metric_twist(self, twist: Optional[np.ndarray] = None, seed: int = 0) -> "MatrixModel":
        """Same group, but distances measured as ||g^-1 P h P^-1 - I||, which is not left-invariant."""
        if twist is None:
            rng = np.random.default_rng(seed)
            twist = IDENTITY + 0.5 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        return MatrixModel(self.alphabet, self.generators, twist=twist)

    @property
    def exact(self) -> bool:
        return False

    @property
    def has_lattice(self) -> bool:
        return False

    def multiply(self, x, y):
        return canonical_sign(x @ y)

    def invert(self, x):
        # inverse of a determinant-one matrix
        return canonical_sign(np.array([[x[1, 1], -x[0, 1]], [-x[1, 0], x[0, 0]]], dtype=complex))

    def identity(self):
        return IDENTITY.copy()

    def distance(self, x, y) -> Number:
        if self.twist is None:
            m = self.invert(x) @ y
        else:
            m = self.invert(x) @ self.twist @ y @ np.linalg.inv(self.twist)
        return float(min(np.linalg.norm(m - IDENTITY), np.linalg.norm(m + IDENTITY)))

    def equal(self, x, y) -> bool:
        return self.distance(x, y) <= TOLERANCE

    def operator_distortion(self) -> float:
        return max(2 * np.linalg.norm(g) * np.linalg.norm(self.invert(g)) for g in self.generators)

    def __no_lattice(self, operation: str):
        return ValueError(f"Model type {self.model_type} has no lattice; {operation} is not available")

    def project(self, g):
        raise self.__no_lattice("coset projection")

    def is_in_lattice(self, g) -> bool:
        raise self.__no_lattice("lattice membership")

    def min_lattice_displacement(self) -> Optional[Number]:
        return None

    def delta_for(self, epsilon: Number) -> Number:
        return float(epsilon) / (self.operator_distortion() + 1)

    def build_cells(self, delta: Number) -> Partition:
        raise self.__no_lattice("partitioning B")

    def locate(self, partition: Partition, point) -> int:
        raise self.__no_lattice("cell location")

    def displacement(self, representative, point):
        raise self.__no_lattice("cell displacement")

    def sample_element(self, rng: np.random.Generator):
        m = IDENTITY + 0.5 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        return normalize_determinant(m)

    def sample_point(self, rng: np.random.Generator):
        raise self.__no_lattice("Haar sampling on B")

    def sample_in_cell(self, partition: Partition, cell_id: int, rng: np.random.Generator):
        raise self.__no_lattice("cell sampling")

    def element_to_json(self, g) -> Any:
        return [[[float(x.real), float(x.imag)] for x in row] for row in g]

    def to_config(self) -> Dict[str, Any]:
        config = {
            "type": self.model_type,
            "images": {name: self.element_to_json(self.generators[s]) for s, name in enumerate(self.alphabet.names)},
        }
        if self.twist is not None:
            config["twist"] = self.element_to_json(self.twist)
        return config
