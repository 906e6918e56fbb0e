import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import AbstractSet, Dict, List, Optional, Tuple

import networkx as nx

from src.triangulation.skeleton import boundary_set, one_skeleton
from src.triangulation.triangulation import TET_EDGES, Triangulation, face_vertices
from src.utils.io_utils import Number

K1_CONVENTION = "face-corner incidences per edge class"


@dataclass(frozen=True)
class NormalCurveType:
    kind: str  # 'triangle' or 'quad'
    # the vertex cut off by a triangle, or the pair one side of a quad
    vertices: Tuple[int, ...]

    @property
    def sides(self) -> int:
        return 3 if self.kind == "triangle" else 4


def enumerate_normal_curve_types() -> List[NormalCurveType]:
    """The four vertex-linking triangles and the three quadrilaterals of a tetrahedron."""
    triangles = [NormalCurveType("triangle", (v,)) for v in range(4)]
    quads = [NormalCurveType("quad", (0, v)) for v in (1, 2, 3)]
    return triangles + quads


@dataclass(frozen=True)
class NormalArc:
    face: int
    # edge classes whose midpoints the arc joins
    ends: Tuple[int, int]


@dataclass(frozen=True)
class NormalCell:
    tetrahedron: int
    curve: NormalCurveType
    corners: Tuple[int, ...]


@dataclass
class NormalSurfaceComplex:
    zero_cells: Tuple[int, ...]
    arcs: List[NormalArc]
    cells: List[NormalCell]
    euler_characteristic: int = 0
    components: int = 0
    b1_mod2: int = 0
    component_euler: List[int] = field(default_factory=list)

    def counts(self) -> Dict[str, int]:
        return {"zero_cells": len(self.zero_cells), "one_cells": len(self.arcs), "two_cells": len(self.cells),
                "triangles": sum(1 for c in self.cells if c.curve.kind == "triangle"),
                "quads": sum(1 for c in self.cells if c.curve.kind == "quad")}

    def to_dict(self) -> dict:
        return {
            "counts": self.counts(),
            "euler_characteristic": self.euler_characteristic,
            "components": self.components,
            "component_euler_characteristics": self.component_euler,
            "b1_mod2": self.b1_mod2,
            "cells": [{"tetrahedron": c.tetrahedron, "kind": c.curve.kind, "vertices": list(c.curve.vertices)}
                      for c in self.cells],
        }


def _boundary_edges(triangulation: Triangulation, vertices: AbstractSet[int]) -> frozenset:
    return frozenset(boundary_set(one_skeleton(triangulation), vertices))


def face_parity_check(triangulation: Triangulation, vertices: AbstractSet[int]) -> Dict:
    """Every face must carry 0 or 2 edges of dA, counted over its three edge slots."""
    boundary = _boundary_edges(triangulation, vertices)
    violations = []
    histogram = {0: 0, 1: 0, 2: 0, 3: 0}
    for face, (t, f) in enumerate(triangulation.face_representatives()):
        count = sum(1 for a, b in combinations(face_vertices(f), 2) if triangulation.edge_of(t, a, b) in boundary)
        histogram[count] += 1
        if count not in (0, 2):
            violations.append(f"face {face} (tetrahedron {t}, face {f}) has {count} edges in the boundary set")
    return {"faces": triangulation.num_faces, "histogram": histogram, "violations": violations}


def _tet_curve(triangulation: Triangulation, t: int, boundary: frozenset,
               vertices: AbstractSet[int]) -> Optional[NormalCurveType]:
    crossing = [(a, b) for a, b in TET_EDGES if triangulation.edge_of(t, a, b) in boundary]
    if not crossing:
        return None
    if len(crossing) not in (3, 4):
        raise ValueError(f"Tetrahedron {t} has {len(crossing)} edges in the boundary set, expected 0, 3 or 4")
    inside = [v for v in range(4) if triangulation.vertex_of(t, v) in vertices]
    outside = [v for v in range(4) if v not in inside]
    if len(crossing) == 3:
        lone = inside if len(inside) == 1 else outside
        if len(lone) != 1:
            raise ValueError(f"Tetrahedron {t}: three boundary edges but corners split {len(inside)}+{len(outside)}")
        return NormalCurveType("triangle", (lone[0],))
    if len(inside) != 2:
        raise ValueError(f"Tetrahedron {t}: four boundary edges but corners split {len(inside)}+{len(outside)}")
    pair = inside if 0 in inside else outside
    return NormalCurveType("quad", tuple(pair))


def build_surface(triangulation: Triangulation, vertices: AbstractSet[int]) -> NormalSurfaceComplex:
    """
    The surface of normal discs separating the set from its complement: one 0-cell at the midpoint of each
    boundary edge, one normal arc in each face that meets the boundary, one triangle or quad per tetrahedron
    that does.
    """
    parity = face_parity_check(triangulation, vertices)
    if parity["violations"]:
        raise ValueError(f"Face parity fails: {parity['violations'][0]}")
    boundary = _boundary_edges(triangulation, vertices)

    arcs = []
    for face, (t, f) in enumerate(triangulation.face_representatives()):
        ends = [triangulation.edge_of(t, a, b) for a, b in combinations(face_vertices(f), 2)
                if triangulation.edge_of(t, a, b) in boundary]
        if ends:
            arcs.append(NormalArc(face, (ends[0], ends[1])))

    cells = []
    for t in range(triangulation.num_tetrahedra):
        curve = _tet_curve(triangulation, t, boundary, vertices)
        if curve is not None:
            corners = tuple(triangulation.edge_of(t, a, b) for a, b in TET_EDGES
                            if triangulation.edge_of(t, a, b) in boundary)
            cells.append(NormalCell(t, curve, corners))

    surface = NormalSurfaceComplex(zero_cells=tuple(sorted(boundary)), arcs=arcs, cells=cells)
    _attach_topology(surface)
    logging.info(f"Normal surface: {len(surface.zero_cells)} 0-cells, {len(arcs)} 1-cells, {len(cells)} 2-cells, "
                 f"chi = {surface.euler_characteristic}, {surface.components} components")
    return surface


def _attach_topology(surface: NormalSurfaceComplex):
    graph = nx.MultiGraph()
    graph.add_nodes_from(surface.zero_cells)
    graph.add_edges_from(arc.ends for arc in surface.arcs)
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    component_of = {v: i for i, c in enumerate(components) for v in c}
    euler = [0] * len(components)
    for v in surface.zero_cells:
        euler[component_of[v]] += 1
    for arc in surface.arcs:
        euler[component_of[arc.ends[0]]] -= 1
    for cell in surface.cells:
        euler[component_of[cell.corners[0]]] += 1
    surface.component_euler = euler
    surface.components = len(components)
    surface.euler_characteristic = sum(euler)
    surface.b1_mod2 = sum(2 - chi for chi in euler)


def d2_upper_bound_surface(surface: NormalSurfaceComplex) -> int:
    return len(surface.arcs)


@dataclass(frozen=True)
class ClaimConstants:
    k0: Fraction
    k1: Fraction
    k2: Fraction
    max_face_valence: int
    convention: str = K1_CONVENTION

    def to_dict(self) -> dict:
        return {"k0": self.k0, "k1": self.k1, "k2": self.k2, "max_face_valence": self.max_face_valence,
                "k1_convention": self.convention}


def claim_constants(triangulation: Triangulation) -> ClaimConstants:
    """k0 = 1, k1 = half the largest number of face corners on an edge class, k2 = 2/3 k1."""
    valence = [0] * triangulation.num_edges
    for t, f in triangulation.face_representatives():
        for a, b in combinations(face_vertices(f), 2):
            valence[triangulation.edge_of(t, a, b)] += 1
    max_valence = max(valence)
    k0 = Fraction(1)
    k1 = k0 * Fraction(max_valence, 2)
    return ClaimConstants(k0=k0, k1=k1, k2=Fraction(2, 3) * k1, max_face_valence=max_valence)


def claim_bounds_eval(counts: Dict[str, int], a_size: int, boundary_size: int, k4: Number,
                      constants: ClaimConstants) -> Dict:
    """Check the cell counts against k_i |dA| and evaluate the upper bound on d_2(S) and lower bound on d_2(N)."""
    if a_size < 1 or boundary_size < 0:
        raise ValueError(f"Need |A| >= 1 and |dA| >= 0, got {a_size} and {boundary_size}")
    k4 = Fraction(k4)
    if k4 < 0:
        raise ValueError(f"k4 must be nonnegative, got {k4}")
    k3 = constants.k1 + k4 * constants.k2
    k5 = k4 * constants.k2 / 2
    zero, one, two = counts["zero_cells"], counts["one_cells"], counts["two_cells"]
    checks = {
        "zero_cells": zero <= constants.k0 * boundary_size,
        "one_cells": one <= constants.k1 * boundary_size,
        "two_cells": two <= constants.k2 * boundary_size,
        "two_vs_one_cells": 3 * two <= 2 * one,
    }
    upper = one + k4 * two
    lower = Fraction(a_size, 2) - k5 * boundary_size
    return {
        "constants": {**constants.to_dict(), "k3": k3, "k4": k4, "k5": k5},
        "a_size": a_size,
        "boundary_size": boundary_size,
        "counts": dict(counts),
        "checks": checks,
        "violations": sorted(name for name, ok in checks.items() if not ok),
        "claim2_upper_bound": upper,
        "claim2_constant_bound": k3 * boundary_size,
        "claim3_lower_bound": lower,
        "separated": lower > upper,
    }
