import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.utils.io_utils import exact_provenance
from src.weighting.digraph import LabeledDigraph
from src.weighting.weighting import InfeasibleWeightingError, Weighting

Row = Dict[int, Fraction]


class _Tableau:
    """
    Sparse simplex tableau over the rationals. Rows are {column: coefficient} with the right-hand side
    kept separately. Pivoting follows Bland's rule, so runs are deterministic and terminate.
    """

    def __init__(self, rows: List[Row], rhs: List[Fraction], basis: List[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.objective: Row = {}
        # minus the current objective value, as in the bottom-right corner of a dense tableau
        self.corner = Fraction(0)

    @property
    def value(self) -> Fraction:
        return -self.corner

    def set_objective(self, costs: Row):
        objective = {j: Fraction(c) for j, c in costs.items() if c != 0}
        corner = Fraction(0)
        for i, b in enumerate(self.basis):
            cost = costs.get(b, 0)
            if cost == 0:
                continue
            for j, a in self.rows[i].items():
                objective[j] = objective.get(j, 0) - cost * a
            corner -= cost * self.rhs[i]
        self.objective = {j: c for j, c in objective.items() if c != 0}
        self.corner = corner

    @staticmethod
    def _eliminate(target: Row, source: Row, factor: Fraction):
        for j, a in source.items():
            value = target.get(j, 0) - factor * a
            if value == 0:
                target.pop(j, None)
            else:
                target[j] = value

    def pivot(self, r: int, c: int):
        row = self.rows[r]
        factor = row[c]
        if factor != 1:
            for j in row:
                row[j] = row[j] / factor
            self.rhs[r] = self.rhs[r] / factor
        for i, other in enumerate(self.rows):
            if i == r or c not in other:
                continue
            f = other[c]
            self._eliminate(other, row, f)
            self.rhs[i] -= f * self.rhs[r]
        if c in self.objective:
            f = self.objective[c]
            self._eliminate(self.objective, row, f)
            self.corner -= f * self.rhs[r]
        self.basis[r] = c

    def run(self, allowed_columns: int) -> bool:
        """Minimize over columns < allowed_columns; False if unbounded."""
        while True:
            entering = min((j for j, c in self.objective.items() if c < 0 and j < allowed_columns), default=None)
            if entering is None:
                return True
            best: Optional[Tuple[Fraction, int, int]] = None
            for i, row in enumerate(self.rows):
                a = row.get(entering, 0)
                if a > 0:
                    candidate = (self.rhs[i] / a, self.basis[i], i)
                    if best is None or candidate < best:
                        best = candidate
            if best is None:
                return False
            self.pivot(best[2], entering)

    def drop_rows(self, indices: List[int]):
        keep = [i for i in range(len(self.rows)) if i not in set(indices)]
        self.rows = [self.rows[i] for i in keep]
        self.rhs = [self.rhs[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]


def solve_equality_lp(rows: List[Row], rhs: List[Fraction], costs: Row, num_columns: int) -> Optional[List[Fraction]]:
    """
    Minimize costs . y subject to rows . y = rhs and y >= 0, exactly. Returns None when infeasible.
    Two phases: artificial variables first, then the real objective on the feasible basis found.
    """
    rows = [dict(row) for row in rows]
    rhs = [Fraction(b) for b in rhs]
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = {j: -a for j, a in rows[i].items()}
            rhs[i] = -rhs[i]
    artificial = [num_columns + i for i in range(len(rows))]
    for i, column in enumerate(artificial):
        rows[i][column] = Fraction(1)
    tableau = _Tableau(rows, rhs, list(artificial))
    tableau.set_objective({column: 1 for column in artificial})
    tableau.run(num_columns + len(artificial))
    if tableau.value > 0:
        return None

    # move remaining (zero-level) artificials out of the basis; rows where that fails are redundant
    redundant = []
    for i, b in enumerate(tableau.basis):
        if b < num_columns:
            continue
        column = min((j for j in tableau.rows[i] if j < num_columns), default=None)
        if column is None:
            redundant.append(i)
        else:
            tableau.pivot(i, column)
    tableau.drop_rows(redundant)
    for row in tableau.rows:
        for j in [j for j in row if j >= num_columns]:
            del row[j]

    tableau.set_objective(costs)
    if not tableau.run(num_columns):
        raise ValueError("Linear program is unbounded")
    solution = [Fraction(0)] * num_columns
    for i, b in enumerate(tableau.basis):
        solution[b] = tableau.rhs[i]
    return solution


def solve_integer_weighting(graph: LabeledDigraph) -> Weighting:
    """
    Strictly positive integer weights balancing every (vertex, label) in and out.

    Solved as a rational LP with every weight >= 1 and total edge weight minimized, then scaled by
    the lcm of the denominators and divided by the common gcd. Variables are ordered edges first,
    in edge index order, which fixes Bland's tie-breaking.
    """
    if not graph.vertices:
        raise InfeasibleWeightingError("Y has no vertices")
    violations = graph.validity_violations()
    if violations:
        raise InfeasibleWeightingError(f"Y admits no positive weighting: {'; '.join(violations)}")

    m = len(graph.edges)
    vertex_column = {v: m + i for i, v in enumerate(graph.vertices)}
    num_columns = m + len(graph.vertices)

    # substitute x = 1 + y so the bound x >= 1 becomes y >= 0
    rows: List[Row] = []
    rhs: List[Fraction] = []
    for (v, s, side), edge_ids in sorted(graph.incidence().items()):
        row = {k: Fraction(1) for k in edge_ids}
        row[vertex_column[v]] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(1 - len(edge_ids)))
    costs = {k: 1 for k in range(m)}

    solution = solve_equality_lp(rows, rhs, costs, num_columns)
    if solution is None:
        raise InfeasibleWeightingError("Balance equations have no solution with all weights positive")

    values = [1 + y for y in solution]
    scale = math.lcm(*[x.denominator for x in values])
    integers = [int(x * scale) for x in values]
    common = math.gcd(*integers)
    integers = [x // common for x in integers]

    weighting = Weighting(
        vertex_weight={v: integers[vertex_column[v]] for v in graph.vertices},
        edge_weight={k: integers[k] for k in range(m)},
        provenance=exact_provenance(),
    )
    logging.info(f"Integer weighting: total vertex weight {weighting.total_vertex_weight()}, "
                 f"total edge weight {weighting.total_edge_weight()}")
    return weighting
