from fractions import Fraction

import numpy as np
import pytest

from src.covers.rose_cover import RoseCover, is_rose_covering
from src.models.abstract_model import ArithmeticMode
from src.models.finite.finite_model import FiniteModel
from src.models.torus.torus_model import TorusModel
from src.perturbation.partition import build_partition, choose_delta
from src.perturbation.transition_graph import build_Y
from src.weighting.digraph import LabeledDigraph, YEdge
from src.weighting.expansion import expand_cover
from src.weighting.solver import solve_equality_lp, solve_integer_weighting
from src.weighting.weighting import (InfeasibleWeightingError, Weighting, WeightingMode, haar_weighting,
                                     verify_weighting)
from src.words.word import Alphabet

S = Alphabet(("s",))
AB = Alphabet(("a", "b"))


def digraph(alphabet, vertices, edges):
    return LabeledDigraph(alphabet=alphabet, vertices=tuple(vertices),
                          edges=tuple(YEdge(src, dst, label) for src, dst, label in edges))


def random_cover(rng, alphabet, n):
    while True:
        perms = tuple(tuple(rng.permutation(n).tolist()) for _ in range(alphabet.size))
        cover = RoseCover(alphabet=alphabet, num_vertices=n, basepoint=0, out_perm=perms)
        if is_rose_covering(cover):
            return cover


def quotient_digraph(cover, classes):
    """Image of a rose covering under a vertex map onto range(classes), edges deduplicated."""
    quotient = {v: v % classes for v in range(cover.num_vertices)}
    edges = sorted({(quotient[v], quotient[cover.out_perm[s][v]], s)
                    for s in range(cover.alphabet.size) for v in range(cover.num_vertices)})
    return digraph(cover.alphabet, range(classes), edges)


def test_solver_three_edge_example():
    graph = digraph(S, [1, 2], [(1, 1, 0), (1, 2, 0), (2, 1, 0)])
    weighting = solve_integer_weighting(graph)
    assert weighting.vertex_weight == {1: 2, 2: 1}
    assert weighting.edge_weight == {0: 1, 1: 1, 2: 1}
    assert verify_weighting(graph, weighting)["max_residual"] == 0


def test_solver_two_cycle_is_all_ones():
    graph = digraph(S, [0, 1], [(0, 1, 0), (1, 0, 0)])
    weighting = solve_integer_weighting(graph)
    assert set(weighting.vertex_weight.values()) == {1}
    assert set(weighting.edge_weight.values()) == {1}


def test_lp_returns_exact_rationals():
    solution = solve_equality_lp([{0: Fraction(2)}], [Fraction(1)], {0: 1}, 1)
    assert solution == [Fraction(1, 2)]
    assert solve_equality_lp([{0: Fraction(1)}], [Fraction(-1)], {0: 1}, 1) is None


def test_solver_rejects_vertex_without_edges():
    graph = digraph(S, [0, 1], [(0, 0, 0)])
    with pytest.raises(InfeasibleWeightingError):
        solve_integer_weighting(graph)


def test_solver_is_deterministic_on_quotients_of_covers():
    rng = np.random.default_rng(17)
    for _ in range(200):
        cover = random_cover(rng, AB, int(rng.integers(1, 7)))
        graph = quotient_digraph(cover, int(rng.integers(1, cover.num_vertices + 1)))
        weighting = solve_integer_weighting(graph)
        check = verify_weighting(graph, weighting)
        assert check["violations"] == [] and check["nonpositive"] == []
        assert weighting.is_integral()
        assert solve_integer_weighting(graph) == weighting


def test_exact_haar_weighting_on_z4(z4_model):
    partition = build_partition(z4_model, choose_delta(z4_model, Fraction(1, 2)))
    graph = build_Y(z4_model, partition)
    weighting = haar_weighting(graph, z4_model, partition)
    assert [(e.src, e.dst) for e in graph.edges] == [(0, 1), (1, 0)]
    assert set(weighting.vertex_weight.values()) == {1}
    assert set(weighting.edge_weight.values()) == {1}


def test_exact_haar_weighting_on_torus_is_balanced(torus_model):
    partition = build_partition(torus_model, choose_delta(torus_model, Fraction(1, 4)))
    graph = build_Y(torus_model, partition)
    weighting = haar_weighting(graph, torus_model, partition)
    check = verify_weighting(graph, weighting)
    assert len(partition) == 64
    assert check["max_residual"] == 0
    assert weighting.total_vertex_weight() == 1


def random_haar_instance(rng):
    names = ("a", "b")[:int(rng.integers(1, 3))]
    if rng.random() < 0.5:
        dimension = int(rng.integers(1, 3))
        images = [tuple(Fraction(int(rng.integers(0, 24)), int(rng.integers(1, 9))) for _ in range(dimension))
                  for _ in names]
        model = TorusModel(Alphabet(names), images, dimension=dimension)
        epsilon = Fraction(1, int(rng.integers(2, 6)))
    else:
        order = int(rng.integers(2, 31))
        model = FiniteModel.cyclic(order, [int(rng.integers(0, order))],
                                   {name: int(rng.integers(0, order)) for name in names})
        epsilon = Fraction(1, 2)
    return model, build_partition(model, choose_delta(model, epsilon))


def test_exact_haar_weighting_balances_random_transition_graphs():
    rng = np.random.default_rng(31)
    for _ in range(200):
        model, partition = random_haar_instance(rng)
        graph = build_Y(model, partition)
        check = verify_weighting(graph, haar_weighting(graph, model, partition))
        assert check["validity"] == []
        assert check["max_residual"] == 0 and check["violations"] == []
        assert check["nonpositive"] == []


def test_single_edge_perturbation_is_localized(torus_model):
    partition = build_partition(torus_model, choose_delta(torus_model, Fraction(1, 4)))
    graph = build_Y(torus_model, partition)
    haar = haar_weighting(graph, torus_model, partition)
    for k in (0, 5, len(graph.edges) - 1):
        edge = graph.edges[k]
        bumped = dict(haar.edge_weight)
        bumped[k] += Fraction(1, 1000)
        check = verify_weighting(graph, Weighting(haar.vertex_weight, bumped))
        name = AB.names[edge.label]
        assert {(v["vertex"], v["label"], v["side"]) for v in check["violations"]} == \
            {(edge.src, name, "out"), (edge.dst, name, "in")}
        assert check["max_residual"] == Fraction(1, 1000)


def test_float_haar_weighting_balances_within_rounding():
    model = TorusModel(AB, [(0.3, 0.1), (0.7, 0.45)], dimension=2, mode=ArithmeticMode.FLOAT)
    partition = build_partition(model, choose_delta(model, 0.2))
    graph = build_Y(model, partition)
    haar = haar_weighting(graph, model, partition)
    check = verify_weighting(graph, haar)
    assert check["violations"] == []
    assert check["max_residual"] < 1e-12

    bumped = dict(haar.edge_weight)
    bumped[0] *= 1 + 1e-6
    assert len(verify_weighting(graph, Weighting(haar.vertex_weight, bumped))["violations"]) == 2


def test_monte_carlo_haar_weighting_within_standard_error():
    model = TorusModel(AB, [(1 / 3, 1 / 5), (2 / 7, 0.0)], dimension=2, mode=ArithmeticMode.FLOAT)
    partition = build_partition(model, choose_delta(model, 0.25))
    graph = build_Y(model, partition)
    weighting = haar_weighting(graph, model, partition, mode=WeightingMode.MONTE_CARLO, samples=20_000, seed=3)
    check = verify_weighting(graph, weighting)
    assert check["violations"] == []
    assert weighting.provenance == {"sampled": {"n": 20_000, "seed": 3}}
    again = haar_weighting(graph, model, partition, mode=WeightingMode.MONTE_CARLO, samples=20_000, seed=3)
    assert again.edge_weight == weighting.edge_weight


def test_expand_cover_with_unit_weights_reproduces_y():
    graph = digraph(S, [0, 1], [(0, 1, 0), (1, 0, 0)])
    cover, projection = expand_cover(graph, solve_integer_weighting(graph), seed=0)
    assert cover.num_vertices == 2
    assert projection.vertex_map == (0, 1)
    assert cover.out_perm == ((1, 0),)


def test_expand_cover_is_a_covering_and_deterministic():
    rng = np.random.default_rng(23)
    for seed in range(30):
        cover = random_cover(rng, AB, int(rng.integers(2, 6)))
        graph = quotient_digraph(cover, 2)
        weighting = solve_integer_weighting(graph)
        x, projection = expand_cover(graph, weighting, seed=seed)
        assert is_rose_covering(x)
        assert x.num_vertices <= weighting.total_vertex_weight()
        for s in range(AB.size):
            for v in range(x.num_vertices):
                edge = graph.edges[projection.edge_map[(v, s)]]
                assert (edge.src, edge.dst) == (projection.vertex_map[v], projection.vertex_map[x.out_perm[s][v]])
        assert expand_cover(graph, weighting, seed=seed) == (x, projection)


def test_expand_cover_rejects_unbalanced_weighting():
    graph = digraph(S, [1, 2], [(1, 1, 0), (1, 2, 0), (2, 1, 0)])
    weighting = Weighting({1: 1, 2: 1}, {0: 1, 1: 1, 2: 1})
    with pytest.raises(ValueError):
        expand_cover(graph, weighting, seed=0)


def test_weighting_dict_round_trip():
    graph = digraph(S, [1, 2], [(1, 1, 0), (1, 2, 0), (2, 1, 0)])
    weighting = solve_integer_weighting(graph)
    restored = Weighting.from_dict(weighting.to_dict(graph), graph)
    assert restored.vertex_weight == weighting.vertex_weight
    assert restored.edge_weight == weighting.edge_weight
    assert LabeledDigraph.from_dict(graph.to_dict()) == graph
