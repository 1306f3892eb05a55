from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from roteprover.words import (G, H, H_ABC, Inconclusive, Morphism, WordError, abelian_complexity,
                              apply_morphism, complement, critical_exponent, exponent_stats,
                              factor_complexity, fixed_point_prefix, has_period, is_rote,
                              max_recurrence_gap, p_prefix, powers_above, q_prefix, q_prefix_inflated,
                              reverse, reversible_factors)

binary = st.text(alphabet="01", min_size=1, max_size=40)


def naive_critical_exponent(w):
    best = Fraction(0)
    for i in range(len(w)):
        for j in range(i + 1, len(w) + 1):
            best = max(best, exponent_stats(w[i:j])[1])
    return best


def test_apply_morphism_examples():
    assert apply_morphism(G, "012") == "011001"
    assert apply_morphism(H, "012") == "01210"
    assert apply_morphism(H, "") == ""


def test_apply_morphism_rejects_unknown_letter():
    with pytest.raises(WordError):
        apply_morphism(G, "013")


def test_fixed_point_prefix():
    assert fixed_point_prefix(H, "0", 21) == "012102101021012101021"
    assert fixed_point_prefix(H, "0", 1) == "0"
    assert fixed_point_prefix(H_ABC, "a", 70).startswith("abcbacbabacbabcbabacb")
    with pytest.raises(WordError):
        fixed_point_prefix(G, "1", 5)


def test_morphism_text_format():
    m = Morphism.parse("# h\n0 -> 01\n1 -> 21\n2 -> 0\n")
    assert m == H
    assert Morphism.parse(m.format()) == m


def test_q_prefix_examples():
    assert q_prefix(12) == "011001001101"
    assert q_prefix(0) == ""
    assert q_prefix(21)[11:21] == "1001100110"
    assert apply_morphism(G, p_prefix(12)).startswith(q_prefix(12))


def test_exponent_stats_examples():
    assert exponent_stats("entente") == (3, Fraction(7, 3))
    assert exponent_stats("aaaa") == (1, Fraction(4))
    assert exponent_stats("1001100110") == (4, Fraction(5, 2))
    with pytest.raises(WordError):
        exponent_stats("")


def test_critical_exponent_examples():
    assert critical_exponent("01") == 1
    assert critical_exponent("entente") == Fraction(7, 3)
    for w in ("00110011010011001001101001100100110010", "00110011010011001001101001100100110011"):
        assert critical_exponent(w) < Fraction(5, 2)


def test_is_rote_examples():
    assert is_rote("00110011010011001001101001100100110010")
    assert is_rote("0")
    assert not is_rote("0001011100")  # length-2 factors fine, but 7 > 6 factors of length 3
    with pytest.raises(WordError):
        is_rote("012")


def test_factor_statistics_on_q(q5000):
    assert factor_complexity(q5000, 1) == 2
    assert factor_complexity(q5000, 16) == 32
    assert factor_complexity(q5000, 10) == 20
    assert abelian_complexity(q5000, 0) == 1
    assert abelian_complexity(q5000, 1) == 2
    assert reversible_factors(q5000, 16) == set()
    assert reversible_factors(q5000, 15)
    assert reversible_factors(q5000, 1) == {"0", "1"}
    with pytest.raises(WordError):
        factor_complexity("0101", 5)


def test_recurrence_gaps(q5000):
    assert max_recurrence_gap(q5000, 1) <= 7
    assert max_recurrence_gap(q5000, 10) <= 70
    assert max_recurrence_gap("0101", 2, "01") == 2
    with pytest.raises(Inconclusive):
        max_recurrence_gap("0110", 2)


def test_powers_above_strictness():
    assert powers_above("1001100110", Fraction(5, 2)) == []
    assert powers_above("1001100110", Fraction(5, 2), strict=False) == [(0, 10, 4)]


def test_cross_construction_agrees():
    assert q_prefix(20000) == q_prefix_inflated(20000)


@given(binary)
def test_rote_and_exponent_symmetric(w):
    for v in (reverse(w), complement(w)):
        assert is_rote(v) == is_rote(w)
        assert critical_exponent(v) == critical_exponent(w)


@given(binary)
def test_critical_exponent_matches_naive(w):
    assert critical_exponent(w) == naive_critical_exponent(w)


@given(binary, st.data())
def test_critical_exponent_monotone_on_factors(w, data):
    i = data.draw(st.integers(0, len(w) - 1))
    j = data.draw(st.integers(i + 1, len(w)))
    assert critical_exponent(w[i:j]) <= critical_exponent(w)


@given(binary, st.integers(1, 40))
def test_period_definition(w, p):
    if p <= len(w):
        assert has_period(w, p) == all(w[i] == w[i + p] for i in range(len(w) - p))
    period, e = exponent_stats(w)
    assert has_period(w, period) and e == Fraction(len(w), period)
    assert not any(has_period(w, k) for k in range(1, period))


@given(st.integers(1, 60))
def test_q_complexity_saturates(n):
    assert factor_complexity(q_prefix(3000), n) == factor_complexity(q_prefix(6000), n) == 2 * n


@given(st.integers(0, 400))
def test_abelian_at_most_factor_complexity(n):
    q = q_prefix(2000)
    assert abelian_complexity(q, n) <= factor_complexity(q, n)


@given(st.integers(0, 3000))
def test_cross_construction_prefixes(n):
    assert q_prefix(n) == q_prefix_inflated(n)
