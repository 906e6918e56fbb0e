import numpy as np
import pytest

from src.covers.rose_cover import (NotACoveringError, RoseCover, accepted_words, covering_violations,
                                   is_in_subgroup, is_rose_covering, schreier_basis, subgroup_index,
                                   subgroup_rank, to_dot, trace_path)
from src.words.word import Alphabet, concat, enumerate_words, parse_word, power

A = Alphabet(("s",))
AB = Alphabet(("a", "b"))


def random_cover(rng, alphabet, n):
    """A random connected rose covering with n vertices; retried until connected."""
    while True:
        perms = [rng.permutation(n).tolist() for _ in range(alphabet.size)]
        cover = RoseCover(alphabet=alphabet, num_vertices=n, basepoint=0, out_perm=tuple(tuple(p) for p in perms))
        if is_rose_covering(cover):
            return cover


def test_rose_is_the_trivial_cover():
    rose = RoseCover.rose(AB)
    assert subgroup_index(rose) == 1
    assert subgroup_rank(rose) == 2
    assert all(is_in_subgroup(rose, w) for w in enumerate_words(AB, 3))


def test_two_cycle_accepts_even_words():
    cover = RoseCover.from_permutations(A, [[1, 0]])
    for w in enumerate_words(A, 6):
        assert is_in_subgroup(cover, w) == (len(w) % 2 == 0)
    assert subgroup_rank(cover) == 1
    assert [str(w) for w in schreier_basis(cover)] == ["s s"]


def test_from_permutations_rejects_non_bijection():
    with pytest.raises(NotACoveringError):
        RoseCover.from_permutations(A, [[0, 0]])


def test_disconnected_graph_is_not_a_covering():
    cover = RoseCover(alphabet=A, num_vertices=2, basepoint=0, out_perm=((0, 1),))
    assert covering_violations(cover) == ["graph is not connected"]
    with pytest.raises(NotACoveringError):
        subgroup_index(cover)


def test_trace_path_backwards_uses_incoming_edge():
    cover = RoseCover.from_permutations(A, [[1, 2, 0]])
    end, edges = trace_path(cover, 0, parse_word("s^-1", A))
    assert end == 2
    assert edges == [((2, 0), -1)]


def test_trace_path_composes_over_products():
    rng = np.random.default_rng(37)
    words = enumerate_words(AB, 4)
    for _ in range(50):
        cover = random_cover(rng, AB, int(rng.integers(1, 7)))
        for _ in range(20):
            u, w = (words[i] for i in rng.integers(len(words), size=2))
            start = int(rng.integers(cover.num_vertices))
            middle, u_edges = trace_path(cover, start, u)
            end, w_edges = trace_path(cover, middle, w)
            assert trace_path(cover, start, concat(u, w))[0] == end
            if len(concat(u, w)) == len(u) + len(w):
                assert trace_path(cover, start, concat(u, w))[1] == u_edges + w_edges


def test_schreier_basis_generates_accepted_loops():
    rng = np.random.default_rng(11)
    for _ in range(20):
        cover = random_cover(rng, AB, int(rng.integers(1, 6)))
        basis = schreier_basis(cover)
        assert len(basis) == subgroup_rank(cover)
        assert all(is_in_subgroup(cover, w) for w in basis)


def test_subgroup_is_closed_under_products_and_inverses():
    rng = np.random.default_rng(3)
    cover = random_cover(rng, AB, 4)
    accepted = accepted_words(cover, 4)
    assert accepted[0].is_empty()
    for _ in range(100):
        u, v = (accepted[i] for i in rng.integers(len(accepted), size=2))
        assert is_in_subgroup(cover, concat(u, v))
        assert is_in_subgroup(cover, u.inverse())


def test_index_of_cyclic_cover_matches_power():
    cover = RoseCover.from_permutations(A, [[1, 2, 3, 0]])
    s = parse_word("s", A)
    assert [k for k in range(1, 9) if is_in_subgroup(cover, power(s, k))] == [4, 8]


def test_dict_round_trip_and_dot():
    cover = RoseCover.from_permutations(AB, [[1, 0, 2], [0, 2, 1]], basepoint=1)
    assert RoseCover.from_dict(cover.to_dict()) == cover
    dot = to_dot(cover)
    assert dot.startswith("digraph X {")
    assert '1 [label="1", shape=doublecircle];' in dot
