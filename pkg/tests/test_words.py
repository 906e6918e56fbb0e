import numpy as np
import pytest

from src.words.word import (Alphabet, Letter, Word, concat, count_reduced_words, empty_word, enumerate_words,
                            exponent_sums, format_word, invert, parse_word, power, reduce)

AB = Alphabet(("a", "b"))


def test_reduce_cancels_adjacent_inverses():
    a, a_inv, b = Letter(0, 1), Letter(0, -1), Letter(1, 1)
    assert reduce([a, a_inv, b], AB).letters == (b,)
    assert reduce([a, b, Letter(1, -1), a_inv], AB).is_empty()


def reduce_by_pair_deletion(letters):
    """Delete the leftmost cancelling pair until none is left."""
    letters = list(letters)
    i = 0
    while i < len(letters) - 1:
        if letters[i + 1] == letters[i].inverse():
            del letters[i:i + 2]
            i = 0
        else:
            i += 1
    return tuple(letters)


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_reduce_matches_pair_deletion(rank):
    alphabet = Alphabet.of_size(rank)
    letters = alphabet.letters()
    rng = np.random.default_rng(rank)
    for _ in range(300):
        raw = [letters[i] for i in rng.integers(len(letters), size=int(rng.integers(0, 15)))]
        word = reduce(raw, alphabet)
        assert word.letters == reduce_by_pair_deletion(raw)
        assert reduce(list(word.letters), alphabet) == word


def test_word_rejects_unreduced_letters():
    with pytest.raises(ValueError):
        Word((Letter(0, 1), Letter(0, -1)), AB)


def test_letter_codes_pair_inverses():
    for letter in AB.letters():
        assert Letter.from_code(letter.code) == letter
        assert Letter.from_code(letter.code ^ 1) == letter.inverse()


@pytest.mark.parametrize("rank,max_len,expected", [(2, 3, 53), (1, 4, 9), (3, 0, 1), (2, 1, 5)])
def test_enumerate_words_counts(rank, max_len, expected):
    words = enumerate_words(Alphabet.of_size(rank), max_len)
    assert len(words) == expected
    assert count_reduced_words(rank, max_len) == expected
    assert len(set(words)) == expected


def test_enumerate_words_is_shortlex():
    words = enumerate_words(AB, 2)
    assert [format_word(w) for w in words[:6]] == ["", "a", "a^-1", "b", "b^-1", "a a"]
    assert all(len(u) <= len(v) for u, v in zip(words, words[1:]))


def test_concat_reduces_and_checks_alphabet():
    u = parse_word("a b", AB)
    v = parse_word("b^-1 a", AB)
    assert format_word(concat(u, v)) == "a a"
    with pytest.raises(ValueError, match="Alphabet mismatch"):
        concat(u, parse_word("a", Alphabet(("a",))))


def test_invert_and_power():
    u = parse_word("a b^-1", AB)
    assert format_word(invert(u)) == "b a^-1"
    assert (u * invert(u)).is_empty()
    assert format_word(power(parse_word("a", AB), 3)) == "a a a"
    assert power(u, 0) == empty_word(AB)
    assert power(u, -2) == power(invert(u), 2)


def test_parse_word_power_shorthand():
    assert parse_word("a^3 b^-2", AB) == parse_word("a a a b^-1 b^-1", AB)
    assert parse_word("1", AB).is_empty()
    with pytest.raises(ValueError):
        parse_word("c", AB)
    with pytest.raises(ValueError):
        parse_word("a^x", AB)


def test_exponent_sums():
    assert exponent_sums(parse_word("a b a^-1 b^-1", AB)) == [0, 0]
    assert exponent_sums(parse_word("a^3 b^-1", AB)) == [3, -1]


def test_random_products_associate():
    rng = np.random.default_rng(5)
    words = enumerate_words(AB, 3)
    for _ in range(200):
        u, v, w = (words[i] for i in rng.integers(len(words), size=3))
        assert (u * v) * w == u * (v * w)
        assert exponent_sums(u * v) == [x + y for x, y in zip(exponent_sums(u), exponent_sums(v))]
