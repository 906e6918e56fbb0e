from fractions import Fraction
from itertools import combinations
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from src.triangulation.cheeger import cheeger_exact, cheeger_sweep
from src.triangulation.normal_surface import (build_surface, claim_bounds_eval, claim_constants,
                                              d2_upper_bound_surface, enumerate_normal_curve_types,
                                              face_parity_check)
from src.triangulation.skeleton import SkeletonGraph, boundary_set, one_skeleton, vertex_set
from src.triangulation.triangulation import GluingError, Triangulation, parse_triangulation
from src.utils.io_utils import load_text

TRIANGULATIONS = Path(__file__).resolve().parents[1] / "datasets" / "triangulations"


def complete_graph(n):
    return SkeletonGraph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n):
    return SkeletonGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_two_tet_sphere_counts(two_tet_sphere):
    assert two_tet_sphere.summary() == {"tetrahedra": 2, "vertices": 4, "edges": 6, "faces": 4,
                                        "euler_characteristic": 0, "orientable": True}


def test_simplex_boundary_skeleton_is_k5(simplex4_boundary):
    skeleton = one_skeleton(simplex4_boundary)
    assert skeleton.num_vertices == 5
    assert sorted(skeleton.edges) == sorted(combinations(range(5), 2))
    assert simplex4_boundary.num_faces == 10


def test_single_tetrahedron_gluings(triangulation_corpus):
    two_vertices, one_vertex = triangulation_corpus[-2:]
    assert (two_vertices.num_vertices, two_vertices.num_edges, two_vertices.num_faces) == (2, 3, 2)
    assert (one_vertex.num_vertices, one_vertex.num_edges, one_vertex.num_faces) == (1, 2, 2)
    skeleton = one_skeleton(one_vertex)
    assert all(u == v for u, v in skeleton.edges)
    assert skeleton.to_dict()["loops"] == 2


def test_every_corpus_triangulation_has_zero_euler_characteristic(triangulation_corpus):
    for triangulation in triangulation_corpus:
        assert triangulation.euler_characteristic() == 0
        assert triangulation.is_orientable()
        assert triangulation.num_tetrahedra <= 10


@pytest.mark.parametrize("name,vertices", [("s3_two_tet.tri", 4), ("simplex4_boundary.tri", 5),
                                           ("one_tet_one_vertex.tri", 1)])
def test_parse_triangulation_files(name, vertices):
    triangulation = parse_triangulation(load_text(TRIANGULATIONS / name))
    assert triangulation.num_vertices == vertices
    assert triangulation.euler_characteristic() == 0
    assert parse_triangulation(triangulation.to_text()).gluings == triangulation.gluings


def test_unglued_face_is_rejected():
    with pytest.raises(GluingError):
        parse_triangulation("1:0:0123 1:1:0123 1:2:0123 -\n0:0:0123 0:1:0123 0:2:0123 -\n")


def test_mismatched_gluing_is_rejected():
    with pytest.raises(GluingError):
        parse_triangulation("1:0:0123 1:1:0123 1:2:0123 1:3:0123\n0:0:0123 0:1:0123 0:3:0132 0:2:0132\n")
    with pytest.raises(GluingError):
        Triangulation.from_facets([[0, 1, 2, 3]])


def test_boundary_set_and_vertex_set():
    k4 = complete_graph(4)
    assert len(boundary_set(k4, {0})) == 3
    assert len(boundary_set(k4, {0, 1})) == 4
    loops = SkeletonGraph.from_edges(2, [(0, 0), (0, 1)])
    assert boundary_set(loops, {0}) == [1]
    with pytest.raises(ValueError):
        vertex_set(k4, [])
    with pytest.raises(ValueError):
        vertex_set(k4, [4])


def test_cheeger_constants_of_small_graphs():
    assert cheeger_exact(complete_graph(4)) == 2
    assert cheeger_exact(complete_graph(5)) == 3
    assert cheeger_exact(cycle_graph(6)) == Fraction(2, 3)
    assert cheeger_sweep(cycle_graph(6)) == Fraction(2, 3)


def test_cheeger_isolated_vertex_with_loop():
    graph = SkeletonGraph.from_edges(3, [(0, 1), (2, 2)])
    assert cheeger_exact(graph) == 0
    assert cheeger_sweep(graph) == 0


def test_cheeger_input_limits():
    single = SkeletonGraph.from_edges(1, [(0, 0)])
    assert cheeger_exact(single) is None
    assert cheeger_sweep(single) is None
    with pytest.raises(ValueError):
        cheeger_exact(cycle_graph(8), cap=6)


def test_sweep_never_beats_exact():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(2, 17))
        graph = SkeletonGraph.from_networkx(nx.gnp_random_graph(n, 0.4, seed=int(rng.integers(10_000))))
        assert cheeger_sweep(graph) >= cheeger_exact(graph)


def test_cheeger_of_corpus_skeletons(triangulation_corpus):
    for triangulation in triangulation_corpus:
        skeleton = one_skeleton(triangulation)
        if skeleton.num_vertices >= 2:
            assert cheeger_sweep(skeleton) >= cheeger_exact(skeleton) > 0


def test_normal_curve_types():
    types = enumerate_normal_curve_types()
    assert len(types) == 7
    assert sorted(t.sides for t in types) == [3, 3, 3, 3, 4, 4, 4]


def test_face_parity_holds_for_random_sets(triangulation_corpus):
    rng = np.random.default_rng(19)
    for triangulation in triangulation_corpus:
        for _ in range(10):
            chosen = {v for v in range(triangulation.num_vertices) if rng.random() < 0.5}
            if not chosen:
                continue
            report = face_parity_check(triangulation, chosen)
            assert report["violations"] == []
            assert report["histogram"][1] == report["histogram"][3] == 0
            surface = build_surface(triangulation, chosen)
            assert surface.b1_mod2 <= d2_upper_bound_surface(surface)
            boundary = len(boundary_set(one_skeleton(triangulation), chosen))
            bounds = claim_bounds_eval(surface.counts(), len(chosen), boundary, 0, claim_constants(triangulation))
            assert bounds["violations"] == []


def test_simplicial_surfaces_are_closed_and_orientable(triangulation_corpus):
    rng = np.random.default_rng(7)
    for triangulation in triangulation_corpus[:5]:
        for _ in range(5):
            chosen = {v for v in range(triangulation.num_vertices) if rng.random() < 0.5} or {0}
            surface = build_surface(triangulation, chosen)
            assert all(chi % 2 == 0 and chi <= 2 for chi in surface.component_euler)
            counts = surface.counts()
            assert 3 * counts["two_cells"] <= 2 * counts["one_cells"]


def test_vertex_link_in_simplex_boundary(simplex4_boundary):
    surface = build_surface(simplex4_boundary, {0})
    assert surface.counts() == {"zero_cells": 4, "one_cells": 6, "two_cells": 4, "triangles": 4, "quads": 0}
    assert surface.euler_characteristic == 2
    assert surface.components == 1
    assert surface.b1_mod2 == 0


def test_edge_neighbourhood_in_simplex_boundary(simplex4_boundary):
    surface = build_surface(simplex4_boundary, {0, 1})
    assert surface.counts() == {"zero_cells": 6, "one_cells": 9, "two_cells": 5, "triangles": 2, "quads": 3}
    assert surface.euler_characteristic == 2


def test_claim_constants_and_bounds(simplex4_boundary):
    constants = claim_constants(simplex4_boundary)
    assert (constants.k0, constants.k1, constants.k2) == (1, Fraction(3, 2), 1)
    assert constants.max_face_valence == 3

    surface = build_surface(simplex4_boundary, {0})
    report = claim_bounds_eval(surface.counts(), 1, 4, 1, constants)
    assert report["violations"] == []
    assert report["constants"]["k3"] == Fraction(5, 2)
    assert report["constants"]["k5"] == Fraction(1, 2)
    assert report["claim2_upper_bound"] == 10
    assert report["claim2_constant_bound"] == 10
    assert report["claim3_lower_bound"] == Fraction(-3, 2)
    assert report["separated"] is False


def test_claim_bounds_flag_oversized_counts(simplex4_boundary):
    constants = claim_constants(simplex4_boundary)
    counts = {"zero_cells": 9, "one_cells": 6, "two_cells": 5}
    report = claim_bounds_eval(counts, 1, 4, 0, constants)
    assert report["violations"] == ["two_cells", "two_vs_one_cells", "zero_cells"]
    with pytest.raises(ValueError):
        claim_bounds_eval(counts, 0, 4, 0, constants)
    with pytest.raises(ValueError):
        claim_bounds_eval(counts, 1, 4, -1, constants)


def test_face_parity_and_claim_one_bounds_on_a_thousand_sets(triangulation_corpus):
    rng = np.random.default_rng(53)
    for k in range(1000):
        triangulation = triangulation_corpus[k % len(triangulation_corpus)]
        n = triangulation.num_vertices
        density = rng.random()
        chosen = {v for v in range(n) if rng.random() < density} or {int(rng.integers(n))}
        assert face_parity_check(triangulation, chosen)["violations"] == []
        counts = build_surface(triangulation, chosen).counts()
        boundary = len(boundary_set(one_skeleton(triangulation), chosen))
        constants = claim_constants(triangulation)
        assert counts["zero_cells"] <= constants.k0 * boundary
        assert claim_bounds_eval(counts, len(chosen), boundary, 0, constants)["violations"] == []
