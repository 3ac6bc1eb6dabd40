from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from invcorr.errors import EmptyResult, InsufficientPrefix
from invcorr.words import (Word, all_patterns, concat, count, density, density_table,
                           occurrence_positions, patterns_upto, prefix_frequency, read_word,
                           repeat_to, rotate, write_word)

from conftest import brute_count

words = st.text(alphabet="01", min_size=1, max_size=40)
patterns = st.text(alphabet="01", min_size=0, max_size=7)


@pytest.mark.parametrize("sigma, expected", [("0", {0, 3}), ("", {0, 1, 2, 3}), ("11", {1})])
def test_occurrence_positions_examples(sigma, expected):
    assert occurrence_positions(Word("0110"), sigma) == expected


def test_pattern_longer_than_word_wraps_repeatedly():
    assert occurrence_positions(Word("01"), "01010") == {0}
    assert occurrence_positions(Word("1"), "111") == {0}
    assert count(Word("01"), "01010") == 1


@pytest.mark.parametrize("A, sigma, expected", [
    ("0110", "11", F(1, 4)), ("0110", "", F(1)), ("1", "1", F(1)),
])
def test_density_examples(A, sigma, expected):
    assert density(Word(A), sigma) == expected


def test_concat_examples():
    assert concat([("0", 2), ("1", 2)]) == "0011"
    assert concat([("01", 3)]) == "010101"
    assert concat([("0110", 1), ("", 5)]) == "0110"
    with pytest.raises(EmptyResult):
        concat([("0110", 0), ("1", 0)])


def test_prefix_frequency_examples():
    assert prefix_frequency(Word("111"), "1", 2) == 1
    assert prefix_frequency(Word("0101"), "01", 2) == F(1, 2)
    with pytest.raises(InsufficientPrefix):
        prefix_frequency(Word("01"), "01", 2)


def test_prefix_frequency_is_not_cyclic():
    # cyclically "10" also occurs at position 3 of 0110; without wraparound it cannot
    assert prefix_frequency(Word("01100"), "10", 4) == F(1, 4)


@given(words, patterns)
def test_fast_count_matches_brute_force(A, sigma):
    assert count(Word(A), sigma) == brute_count(A, sigma) == len(occurrence_positions(Word(A), sigma))


@given(words, patterns)
def test_right_and_left_additivity(A, sigma):
    w = Word(A)
    assert count(w, sigma) == count(w, sigma + "0") + count(w, sigma + "1")
    assert count(w, sigma) == count(w, "0" + sigma) + count(w, "1" + sigma)


@given(words, patterns, st.integers(-50, 50))
def test_rotation_invariance(A, sigma, r):
    assert density(Word(A), sigma) == density(rotate(Word(A), r), sigma)


@given(words)
def test_positions_of_one_recover_the_set(A):
    w = Word(A)
    assert occurrence_positions(w, "1") == w.as_set() == {i for i, c in enumerate(A) if c == "1"}
    assert density(w, "") == 1


@given(words, st.integers(0, 5))
def test_density_table_matches_single_queries(A, j):
    table = density_table(Word(A), j)
    assert list(table) == patterns_upto(j)
    for sigma, v in table.items():
        assert v == F(brute_count(A, sigma), len(A))


@given(words, st.integers(1, 3))
def test_repeating_a_word_keeps_cyclic_densities(A, r):
    w = Word(A)
    rep = repeat_to(w, r * len(w))
    for sigma in patterns_upto(4):
        assert density(rep, sigma) == density(w, sigma)


def test_all_patterns_lexicographic():
    assert all_patterns(2) == ["00", "01", "10", "11"]
    assert all_patterns(0) == [""]


def test_word_file_roundtrip(tmp_path):
    p = tmp_path / "w.txt"
    write_word(p, Word("0011"))
    assert p.read_text() == "0011\n"
    assert read_word(p) == Word("0011")
    p.write_text("0101")
    assert str(read_word(p)) == "0101"
