from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from src.orbifold.homology import (GSVerdict, dp_lower_bound, dp_rank, golod_shafarevich, golod_shafarevich_margin,
                                   rank_mod_p, relation_matrix)
from src.orbifold.presentation import (Meridian, OrbifoldData, Presentation, deficiency_bound_check, meridional_presentation,
                                       parse_presentation, reduce_meridional_relators)
from src.orbifold.singular_graph import (LocalGroup, SingularEdge, SingularGraph, SingularVertex, chi_lower_bound,
                                         graph_b1, non_circle_components, sing_p_extract, validate_singular_graph)
from src.utils.io_utils import load_json, load_text
from src.words.word import Alphabet, enumerate_words

ORBIFOLDS = Path(__file__).resolve().parents[1] / "datasets" / "orbifolds"


def graph(num_vertices, edges, local_group=LocalGroup.CYCLIC):
    return SingularGraph(tuple(SingularVertex(i, local_group) for i in range(num_vertices)),
                         tuple(SingularEdge(ends, order) for ends, order in edges))


def kernel_size(matrix, num_generators, p):
    """Number of homomorphisms to Z/p, i.e. of x in (Z/p)^n with M x = 0 mod p, by brute force."""
    m = np.array(matrix, dtype=np.int64).reshape(-1, num_generators)
    points = np.array(list(product(range(p), repeat=num_generators)), dtype=np.int64).reshape(-1, num_generators)
    return int(np.sum(~np.any((points @ m.T) % p, axis=1)))


def random_presentation(rng, max_generators, max_relators, max_len):
    alphabet = Alphabet.of_size(int(rng.integers(1, max_generators + 1)))
    words = enumerate_words(alphabet, max_len)
    relators = tuple(words[i] for i in rng.integers(len(words), size=int(rng.integers(0, max_relators + 1))))
    return Presentation(alphabet, relators)


def test_dp_of_small_presentations():
    ab = Alphabet(("a", "b"))
    assert dp_rank(parse_presentation("a b\na b a^-1 b^-1\n"), 2) == 2
    assert dp_rank(parse_presentation("a\na^4\n"), 2) == 1
    assert dp_rank(parse_presentation("a\na^4\n"), 3) == 0
    assert dp_rank(parse_presentation("a b\na^2 b^3\n"), 5) == 1
    assert dp_rank(Presentation(ab, ()), 7) == 2


def test_dp_rejects_non_prime():
    with pytest.raises(ValueError):
        dp_rank(parse_presentation("a\n"), 4)
    with pytest.raises(ValueError):
        dp_rank(parse_presentation("a\n"), 1)
    with pytest.raises(ValueError):
        dp_lower_bound(OrbifoldData.from_dict(load_json(ORBIFOLDS / "theta_order2.json")), 9)


@pytest.mark.parametrize("seed", range(4))
def test_dp_matches_kernel_count_on_random_presentations(seed):
    rng = np.random.default_rng(41 + seed)
    for _ in range(50):
        presentation = random_presentation(rng, 5, 6, 3)
        p = int(rng.choice([2, 3, 5]))
        d = dp_rank(presentation, p)
        assert p ** d == kernel_size(relation_matrix(presentation), presentation.num_generators, p)


def test_rank_mod_p():
    assert rank_mod_p(np.array([[2, 4], [1, 2]]), 2) == 1
    assert rank_mod_p(np.array([[2, 4], [1, 3]]), 2) == 1
    assert rank_mod_p(np.array([[1, 0], [0, 1]]), 3) == 2
    assert rank_mod_p(np.zeros((0, 3), dtype=object), 5) == 0


def test_parse_presentation_file_and_text_round_trip():
    presentation = parse_presentation(load_text(ORBIFOLDS / "presentation_commutator.txt"))
    assert presentation.num_generators == 2 and presentation.num_relators == 1
    assert parse_presentation(presentation.to_text()) == presentation
    with pytest.raises(ValueError):
        parse_presentation("# only a comment\n")


def test_theta_orbifold_bounds():
    data = OrbifoldData.from_dict(load_json(ORBIFOLDS / "theta_order2.json"))
    assert data.consistency_warnings() == []
    presentation = meridional_presentation(data)
    assert dp_rank(presentation, 2) == 3
    assert dp_rank(presentation, 3) == 0
    assert dp_lower_bound(data, 2) == 2
    assert dp_lower_bound(data, 3) == 0
    assert deficiency_bound_check(presentation, 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_reducing_meridional_relators_preserves_dp(p):
    alphabet = Alphabet(("a", "b"))
    data = OrbifoldData.from_dict({
        "presentation": {"generators": ["a", "b"], "relators": ["a b a^-1 b^-1"]},
        "meridians": [{"word": "a", "order": 6}, {"word": "a b", "order": 5}],
        "singular_graph": {"edges": [{"ends": None, "order": 6}, {"ends": None, "order": 5}]},
    })
    assert data.complement.alphabet == alphabet
    assert dp_rank(meridional_presentation(data), p) == dp_rank(reduce_meridional_relators(data, p), p)
    assert dp_lower_bound(data, p) <= dp_rank(meridional_presentation(data), p)


def test_meridian_order_mismatch_is_reported():
    data = OrbifoldData.from_dict({
        "presentation": {"generators": ["a"], "relators": []},
        "meridians": [{"word": "a", "order": 3}],
        "singular_graph": {"edges": [{"ends": None, "order": 2}]},
    })
    assert data.consistency_warnings()


@pytest.mark.parametrize("d", range(21))
def test_golod_shafarevich_threshold(d):
    verdict = golod_shafarevich(d, 0, d)
    assert verdict == (GSVerdict.INFINITE if d >= 9 else GSVerdict.INCONCLUSIVE)


def test_golod_shafarevich_margin():
    assert golod_shafarevich_margin(9, 0, 9) == Fraction(9, 4)
    assert golod_shafarevich_margin(4, 3, 3) == 0
    assert golod_shafarevich(4, 3, 3) == GSVerdict.INCONCLUSIVE
    with pytest.raises(ValueError):
        golod_shafarevich_margin(-1, 0, 0)


def test_theta_graph_betti_and_chi():
    theta = graph(2, [((0, 1), 2)] * 3)
    assert graph_b1(theta) == 2
    assert chi_lower_bound(theta) == 1
    assert non_circle_components(theta) == 1


def test_arcs_and_tripods():
    arc = graph(2, [((0, 1), 2)])
    tripod = graph(4, [((0, 1), 2), ((0, 2), 2), ((0, 3), 2)])
    assert chi_lower_bound(arc) == -1
    assert chi_lower_bound(tripod) == -1
    assert graph_b1(arc) == 0 and graph_b1(tripod) == 0


def test_circles_and_theta():
    mixed = SingularGraph(
        tuple(SingularVertex(i) for i in range(2)),
        (SingularEdge(None, 2), SingularEdge(None, 2)) + tuple(SingularEdge((0, 1), 2) for _ in range(3)))
    assert graph_b1(mixed) == 4
    assert mixed.closed_curves() == 2
    assert non_circle_components(mixed) == 1


def test_sing_p_extract_on_mixed_orders():
    mixed = SingularGraph.from_dict(load_json(ORBIFOLDS / "singular_mixed.json"))
    assert validate_singular_graph(mixed) == []
    two = sing_p_extract(mixed, 2)
    assert sorted(e.order for e in two.edges) == [2, 2, 4, 6]
    assert graph_b1(two) == 3
    three = sing_p_extract(mixed, 3)
    assert graph_b1(three) == 1
    assert chi_lower_bound(sing_p_extract(mixed, 5)) == 0
    with pytest.raises(ValueError):
        sing_p_extract(mixed, 1)


def test_validation_flags_bad_local_groups():
    bad_valence = graph(2, [((0, 1), 2), ((0, 1), 2)], local_group=LocalGroup.Z2XZ2)
    assert len(validate_singular_graph(bad_valence)) == 2
    bad_orders = SingularGraph((SingularVertex(0, LocalGroup.A5), SingularVertex(1)),
                               tuple(SingularEdge((0, 1), 2) for _ in range(3)))
    warnings = validate_singular_graph(bad_orders)
    assert len(warnings) == 1 and "expected [2, 3, 5]" in warnings[0]


def test_singular_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        graph(2, [((0, 1), 1)])
    with pytest.raises(ValueError):
        graph(2, [((0, 5), 2)])
    assert SingularGraph.from_dict(graph(2, [((0, 1), 3)]).to_dict()) == graph(2, [((0, 1), 3)])


def test_reducing_random_meridional_presentations_preserves_dp():
    rng = np.random.default_rng(43)
    for _ in range(100):
        complement = random_presentation(rng, 3, 3, 4)
        words = [w for w in enumerate_words(complement.alphabet, 3) if not w.is_empty()]
        orders = [int(n) for n in rng.integers(2, 13, size=int(rng.integers(1, 4)))]
        meridians = tuple(Meridian(words[int(rng.integers(len(words)))], n) for n in orders)
        data = OrbifoldData(complement, meridians, SingularGraph((), tuple(SingularEdge(None, n) for n in orders)))
        for p in (2, 3, 5):
            assert dp_rank(meridional_presentation(data), p) == dp_rank(reduce_meridional_relators(data, p), p)
