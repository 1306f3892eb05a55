from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from roteprover.automata import Dfa
from roteprover.numeration import (DT_Q_TEXT, NumerationError, Recurrence, addition_box_errors,
                                   char_recurrence, constant_recognizer, dt_from_morphism, parse_system,
                                   synthesize_linear)
from roteprover.words import G, H_ABC, Morphism, apply_morphism, q_prefix


def test_dt_h_shape(sys_h):
    edges = {(t.source, t.digit, t.target) for t in sys_h.transitions}
    assert edges == {("a", 0, "a"), ("a", 1, "b"), ("b", 1, "b"), ("b", 0, "c"), ("c", 0, "a")}
    assert sys_h.sequence("a", 1, 6) == [1, 2, 4, 7, 12, 21]
    assert sys_h.sequence("b", 1, 6) == [1, 1, 2, 4, 7, 12]
    assert all(v == 0 for t in sys_h.transitions if t.digit == 0 for v in t.initial)
    assert sys_h.recurrence.coefficients == (2, -1, 1)


def test_dt_q_shape(sys_q):
    edges = {(t.source, t.digit, t.target) for t in sys_q.transitions}
    assert edges == {("a", 0, "a"), ("a", 3, "b"), ("a", 1, "1"), ("a", 2, "1"), ("b", 3, "b"),
                     ("b", 0, "c"), ("b", 1, "1"), ("c", 0, "a"), ("c", 1, "1"), ("c", 2, "1")}
    assert sys_q.sequence("a", 3, 6) == [3, 4, 7, 13, 23, 40]
    assert sys_q.sequence("b", 3, 6) == [2, 3, 4, 7, 13, 23]
    # increment digits carry ultimately null sequences
    assert sys_q.sequence("a", 2, 5) == [2, 0, 0, 0, 0]
    assert sys_q.recurrence.polynomial_str() == "X^4 - 2*X^3 + X^2 - X"
    assert sys_q.dfao().minimize().n_states == 4


def test_char_recurrence():
    M = H_ABC.incidence_matrix("abc")
    assert [[int(v) for v in row] for row in M] == [[1, 1, 0], [0, 1, 1], [1, 0, 0]]
    rec = char_recurrence(M)
    assert rec.polynomial_str() == "X^3 - 2*X^2 + X - 1"
    X = sympy.Symbol("X")
    assert sympy.Matrix(M).charpoly(X).as_expr() == X**3 - 2 * X**2 + X - 1
    assert char_recurrence([[1]]).polynomial_str() == "X - 1"
    assert rec.satisfied_by([1, 2, 3, 5, 9, 16])


def test_dominant_root_interval():
    lo, hi = Recurrence.from_polynomial((1, -2, 1, -1)).dominant_root_interval()
    X = sympy.Symbol("X")
    theta = max(sympy.Poly(X**3 - 2 * X**2 + X - 1).nroots(n=40), key=lambda z: sympy.re(z))
    assert lo <= Fraction(str(theta)) <= hi and lo > 1
    assert hi - lo < Fraction(1, 10**9)
    # the 16-digit decimal value agrees to its precision
    assert abs(Fraction("1.7548776662466916") - lo) < Fraction(1, 10**14)


def test_lengths_match_morphism_iteration(sys_h):
    w = "a"
    rec = sys_h.recurrence.extend([1, 2, 4], 16)
    g_abc = Morphism({"a": "011", "b": "0", "c": "01"})
    rec_q = sys_h.recurrence.times_x().extend([3, 4, 7, 13], 16)
    for n in range(16):
        assert len(w) == rec[n]
        assert len(apply_morphism(g_abc, w)) == rec_q[n]
        w = apply_morphism(H_ABC, w)


# published integer sequence a(n) = a(n-1) + a(n-2) + a(n-4), offset 0
REFERENCE_LENGTHS = [0, 1, 1, 1, 2, 4, 7, 12, 21, 37, 65, 114, 200, 351, 616]


def test_length_sequences_match_reference(sys_h):
    assert sys_h.sequence("a", 1, 10) == REFERENCE_LENGTHS[3:13]
    assert sys_h.sequence("b", 1, 10) == REFERENCE_LENGTHS[2:12]


def test_evaluate_and_represent_examples(sys_h, sys_q):
    assert sys_h.evaluate("1000") == 7
    assert sys_h.evaluate("") == 0
    assert sys_q.evaluate("333") == 12
    assert sys_h.represent_str(5) == "110"
    assert sys_q.represent_str(5) == "31"
    assert sys_q.represent_str(8) == "301"
    assert sys_q.represent(0) == ()
    with pytest.raises(NumerationError):
        sys_h.evaluate("11011")  # not a path: c has no 1


@pytest.mark.parametrize("name", ["sys_h", "sys_q"])
def test_radix_order_is_rank(name, request):
    s = request.getfixturevalue(name)
    words = list(s.radix_order(3000))
    assert words == sorted(words, key=lambda w: (len(w), w))
    assert all(s.represent(n) == w and s.evaluate(w) == n for n, w in enumerate(words))


@given(st.integers(0, 10**9))
def test_evaluate_represent_identity(n):
    from roteprover import workbench

    for s in (workbench.system("dt_h"), workbench.system("dt_q")):
        assert s.evaluate(s.represent(n)) == n


def test_dfao_of_p(sys_h):
    d = sys_h.dfao()
    p = "012102101021012101021"
    assert all(d.output(sys_h.represent(n)) == int(c) for n, c in enumerate(p))


def test_constant_recognizer(sys_q, sys_h):
    zero = constant_recognizer(sys_q, 0)
    assert zero.accepts_words(()) and zero.accepts_words((0, 0)) and not zero.accepts_words((1,))
    five = constant_recognizer(sys_q, 5)
    assert five.accepts_words((0, 3, 1)) and not five.accepts_words((3, 0))
    assert constant_recognizer(sys_h, 7).accepts_words((0, 1, 0, 0, 0))


def test_addition_examples(sys_q):
    add = sys_q.addition
    r = sys_q.represent
    assert add.accepts_words(r(2), r(3), r(5))
    assert not add.accepts_words(r(4), r(4), r(9))
    assert all(add.accepts_words(r(x), (), r(x)) for x in range(101))
    assert add.n_states == 143


def test_addition_box_small(sys_h, sys_q):
    for s in (sys_h, sys_q):
        assert addition_box_errors(s, s.addition, 300) == []


def test_addition_box_detects_a_broken_adder(sys_q):
    add = sys_q.addition
    labels = np.ones(add.n_states)
    broken = Dfa(add.tracks, add.bases, add.table, labels, add.initial)
    assert addition_box_errors(sys_q, broken, 50)


@pytest.mark.parametrize("coeffs,const,op", [((2, -3), 1, "<="), ((1, 1, -2), 0, "="), ((3, -1), 2, "!="),
                                              ((1, -2, 1), -1, "<=")])
def test_linear_synthesis_matches_brute_force(sys_q, coeffs, const, op):
    a = synthesize_linear(sys_q, coeffs, const, op)
    tracks = [f"x{i}" for i in range(len(coeffs))]
    a = a.reorder(tracks)
    bound = 25 if len(coeffs) == 3 else 120
    rng = np.random.default_rng(7)
    for _ in range(600):
        vals = rng.integers(0, bound, size=len(coeffs))
        y = int(np.dot(coeffs, vals)) - const  # the form reads sum(c * x) op const
        want = {"=": y == 0, "!=": y != 0, "<=": y <= 0}[op]
        assert a.accepts_words(*[sys_q.represent(int(v)) for v in vals]) == want


def test_system_text_format(sys_q):
    s = parse_system(DT_Q_TEXT, name="dt_q")
    assert s.transitions == sys_q.transitions
    dfao = s.dfao()
    q = q_prefix(500)
    assert all(dfao.output(s.represent(n)) == int(q[n]) for n in range(500))
    with pytest.raises(NumerationError):
        parse_system("[morphism]\na -> b\nb -> a\n")
    with pytest.raises(NumerationError):
        dt_from_morphism(G, "1")
