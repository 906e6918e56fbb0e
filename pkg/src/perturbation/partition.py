import logging
from dataclasses import dataclass
from typing import Any, Tuple

from src.utils.io_utils import Number


@dataclass(frozen=True)
class Cell:
    id: int
    representative: Any
    diameter_bound: Number


@dataclass(frozen=True)
class Partition:
    """
    Finitely many disjoint cells covering the coset space B.

    Membership is answered by the owning model (`model.locate(partition, point)`); `resolution`
    is whatever the model needs for that, e.g. the grid size of a torus partition.
    """
    cells: Tuple[Cell, ...]
    identity_cell: int
    delta: Number
    resolution: Any = None

    def __post_init__(self):
        ids = [c.id for c in self.cells]
        if ids != list(range(len(ids))):
            raise ValueError("Partition cell ids must be 0..n-1 in order")
        if not 0 <= self.identity_cell < len(self.cells):
            raise ValueError(f"Identity cell {self.identity_cell} is not a cell of the partition")
        for cell in self.cells:
            if cell.diameter_bound > self.delta:
                raise ValueError(f"Cell {cell.id} has diameter bound {cell.diameter_bound} > delta {self.delta}")

    def __len__(self) -> int:
        return len(self.cells)

    def representative(self, cell_id: int) -> Any:
        return self.cells[cell_id].representative


def choose_delta(model, epsilon: Number) -> Number:
    """
    Pick delta so that moving both ends of any generator image by at most delta keeps it within epsilon.

    epsilon must also sit below the displacement of every non-trivial lattice element, where the model
    can certify that displacement.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    min_displacement = model.min_lattice_displacement()
    if min_displacement is not None and epsilon >= min_displacement:
        raise ValueError(f"epsilon {epsilon} must be smaller than the minimal lattice displacement {min_displacement}")
    if min_displacement is None:
        logging.info("Lattice displacement cannot be certified for this model; epsilon precheck unchecked")
    delta = model.delta_for(epsilon)
    if delta <= 0:
        raise ValueError(f"Model {model.model_type} cannot certify a positive delta for epsilon {epsilon}")
    logging.info(f"Chose delta = {delta} for epsilon = {epsilon}")
    return delta


def build_partition(model, delta: Number) -> Partition:
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    partition = model.build_cells(delta)
    logging.info(f"Partitioned B into {len(partition)} cells of diameter at most {delta}")
    return partition
