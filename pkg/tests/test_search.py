from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from roteprover.search import (SearchConfig, SearchError, grow_tree, level_counts, symmetry_closure,
                               validate_maximal)
from roteprover.words import critical_exponent, is_rote

LISTED = {"00110011010011001001101001100100110010", "00110011010011001001101001100100110011"}


@pytest.fixture(scope="module")
def strict_tree():
    return grow_tree(SearchConfig(Fraction(5, 2), strict=True))


def test_tree_depth_and_longest_words(strict_tree):
    assert strict_tree.max_depth == 38
    assert not strict_tree.truncated
    assert LISTED <= strict_tree.longest()
    assert strict_tree.longest() == symmetry_closure(LISTED)
    assert len(strict_tree.longest()) == 8


def test_maximal_words_revalidated_by_oracles(strict_tree):
    for w in strict_tree.maximal_words:
        assert is_rote(w) and critical_exponent(w) < Fraction(5, 2)
        for c in "01":
            x = w + c
            assert not is_rote(x) or critical_exponent(x) >= Fraction(5, 2)


def test_level_counts_vanish_after_38():
    counts = level_counts(SearchConfig(), 45)
    assert counts[38] > 0 and counts[39:] == [0] * 7
    assert counts[:2] == [1, 2]


def test_square_free_search_with_cap():
    res = grow_tree(SearchConfig(Fraction(2), strict=True, max_length=10, first_letter_fixed=True))
    assert res.max_depth == 3
    assert res.maximal_words == {"010"}
    assert res.level_counts[1] == 1


def test_symmetry_closure_small():
    assert symmetry_closure({"0"}) == {"0", "1"}
    assert symmetry_closure({"01"}) == {"01", "10"}


def test_non_strict_counts_bounds():
    counts = level_counts(SearchConfig(strict=False), 150)
    assert all(counts[n] >= 2 * n for n in range(1, 151))
    assert all(counts[n] <= 16 * n for n in range(58, 151))


def test_cap_marks_truncation():
    res = grow_tree(SearchConfig(strict=False, max_length=20))
    assert res.truncated and res.max_depth == 20


def test_node_budget_reports_partial_results():
    with pytest.raises(SearchError) as info:
        level_counts(SearchConfig(strict=False, max_nodes=100), 60)
    assert info.value.partial is not None


def test_validation_catches_a_bad_word():
    with pytest.raises(SearchError):
        validate_maximal(SearchConfig(), ["0000"])
    with pytest.raises(SearchError):
        validate_maximal(SearchConfig(), ["0011"])  # extends to 00110


def test_config_rejects_threshold_at_most_one():
    with pytest.raises(ValueError):
        SearchConfig(Fraction(1))


thresholds = st.sampled_from([Fraction(2), Fraction(7, 3), Fraction(5, 2), Fraction(3), Fraction(11, 4)])


@given(thresholds, st.booleans())
def test_fixed_first_letter_halves_counts(t, strict):
    both = level_counts(SearchConfig(t, strict=strict), 24)
    fixed = level_counts(SearchConfig(t, strict=strict, first_letter_fixed=True), 24)
    assert [2 * c for c in fixed[1:]] == both[1:]


@given(thresholds, st.booleans(), st.integers(1, 11))
def test_counts_match_brute_force(t, strict, n):
    cfg = SearchConfig(t, strict=strict)
    words = [format(k, f"0{n}b") for k in range(2 ** n)]
    assert level_counts(cfg, n)[n] == sum(cfg.admits(w) for w in words)
