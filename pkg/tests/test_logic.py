import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from roteprover.logic import CompileError, FormulaSyntaxError, free_vars, parse
from roteprover.logic.linrep import (DivergentCount, LinearRepresentation, count_representation,
                                     linrep_equal, linrep_value)
from roteprover.words import q_prefix

Q = q_prefix(20000)


def first_index(i, n):
    f = Q[i:i + n]
    return Q.find(f)


def next_gap(i, n):
    return Q.find(Q[i:i + n], i + 1) - i


ORACLES = {
    "factoreq": lambda i, j, n: Q[i:i + n] == Q[j:j + n],
    "novel": lambda i, n: n >= 1 and first_index(i, n) == i,
    "twon": lambda i, n: n >= 1 and i < 2 * n,
    "nextgap": lambda g, i, n: next_gap(i, n) == g,
    "maxgap": lambda g, n: max(next_gap(i, n) for i in range(3000)) == g,
    "per": lambda i, n, p: 1 <= p <= n and Q[i:i + n - p] == Q[i + p:i + n],
    "exp52": lambda i, n: any(1 <= p <= n and 2 * n == 5 * p and Q[i:i + n - p] == Q[i + p:i + n]
                              for p in range(1, n + 1)),
}
RANGES = {"i": 90, "j": 90, "n": 22, "g": 40, "p": 12}


def member(store, sys_q, name, **values):
    pred = store[name]
    return pred.automaton.accepts_words(*[sys_q.represent(values[p]) for p in pred.params])


# -- parsing -------------------------------------------------------------------

def test_parse_examples():
    assert free_vars(parse("At,u (t>=i & 2*t<=2*i+3*n & u=t+n) => Q[t]=Q[u]")) == {"i", "n"}
    assert free_vars(parse("Ax x=x")) == set()
    call = parse("$factoreq(i,i+p,n-p)")
    assert call.name == "factoreq" and len(call.args) == 3
    assert free_vars(parse("?msd_mor Ei i=n")) == {"n"}


def test_precedence():
    assert str(parse("~a=b & c=d | e=f => g=h <=> i=j")) == str(
        parse("((((~a=b) & c=d) | e=f) => g=h) <=> i=j"))
    # quantifiers reach as far right as possible
    assert free_vars(parse("Ex x=y & x=z")) == {"y", "z"}


def test_syntax_errors_carry_positions():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("x = = y")
    assert info.value.pos == 4
    with pytest.raises(FormulaSyntaxError):
        parse("Ax (x=1")


# -- compilation -----------------------------------------------------------------

def test_basic_compilation(qc, sys_q):
    diag = qc.automaton("x=y", ("x", "y"))
    assert diag.accepts_words(sys_q.represent(9), sys_q.represent(9))
    assert not diag.accepts_words(sys_q.represent(9), sys_q.represent(8))
    assert qc.eval_closed("Ex x=x")
    assert not qc.eval_closed("Ex x<0")
    assert qc.holds("Q[x]=1", x=5) and qc.holds("Q[x]=0", x=7)


def test_subtraction_underflow_is_false(qc):
    assert qc.holds("x-y=2", x=5, y=3)
    assert not qc.holds("x-y=2", x=1, y=3)
    assert qc.holds("~(x-y=2)", x=1, y=3)


def test_compile_errors(qc):
    with pytest.raises(CompileError):
        qc.eval_closed("x=1")
    with pytest.raises(CompileError):
        qc.automaton("$nope(x)")
    with pytest.raises(CompileError):
        qc.automaton("Z[x]=1")
    qc.define("small", "x<3")
    with pytest.raises(CompileError):
        qc.define("small", "x<4")
    with pytest.raises(CompileError):
        qc.automaton("$small(x,y)")


def test_factoreq_membership_example(store, sys_q):
    assert not member(store, sys_q, "factoreq", i=0, j=3, n=2)
    assert member(store, sys_q, "exp52", i=11, n=10)


def test_quantifier_duality(qc):
    a = qc.automaton("Aj (j<i) => Q[j]!=Q[i]", ("i",))
    b = qc.automaton("~Ej ~((j<i) => Q[j]!=Q[i])", ("i",))
    assert a == b
    c = qc.automaton("Aj ~(j<i) | Q[j]!=Q[i]", ("i",))
    assert a == c


def test_rewritings_agree_on_closed_formulas(qc):
    f1 = "An (n>=1) => Ei Q[i]=1 & Q[i+n]=1"
    f2 = "An ~(n>=1) | Ei Q[i]=1 & Q[i+n]=1"
    assert qc.eval_closed(f1) == qc.eval_closed(f2) is True


def test_constant_multiples(qc):
    assert qc.holds("3*x=y+1", x=4, y=11)
    assert not qc.holds("3*x=y+1", x=4, y=12)


@pytest.mark.parametrize("name", sorted(ORACLES))
def test_soundness_sweep(store, sys_q, name):
    pred = store[name]
    rng = np.random.default_rng(len(name))
    for trial in range(300):
        values = {p: int(rng.integers(0, RANGES[p])) for p in pred.params}
        if name in ("nextgap", "maxgap") and trial % 2 == 0:
            # land on the true gap half the time
            n = values["n"] % 8
            values["n"] = n
            values["g"] = next_gap(values.get("i", 0), n) if name == "nextgap" else \
                max(next_gap(i, n) for i in range(3000))
        if name == "maxgap":
            values["n"] %= 8
        assert member(store, sys_q, name, **values) == ORACLES[name](**values), values


def test_exp52_positions(store, sys_q):
    hits = [i for i in range(200) if member(store, sys_q, "exp52", i=i, n=10)]
    assert hits == [i for i in range(200) if Q[i:i + 10] == "1001100110"]


# -- linear representations ------------------------------------------------------

def test_counting_examples(ctx):
    ctx.script("novel = twon")
    reps = ctx.runner.representations
    assert linrep_value(reps["twon"], 7) == 14
    assert linrep_value(reps["twon"], 0) == 0
    assert linrep_value(reps["novel"], 1) == 2
    assert linrep_value(reps["novel"], 10) == 20
    assert linrep_value(reps["novel"], 16) == 32
    assert linrep_equal(reps["novel"], reps["novel"])
    assert linrep_equal(reps["novel"], reps["twon"])


def test_shifted_count_differs(qc, ctx):
    ctx.script("novel = twon")
    shifted = count_representation(qc.define("twon1", "n>=1 & i<2*n+1").automaton, "i", ("n",), qc.system)
    assert linrep_value(shifted, 1) == 3
    assert not linrep_equal(ctx.runner.representations["novel"], shifted)


def test_count_matches_enumeration(store, sys_q, ctx):
    ctx.script("novel = twon")
    lr = ctx.runner.representations["novel"]
    a = store["novel"]
    for n in range(0, 41):
        firsts = {first_index(i, n) for i in range(3000)} if n else set()
        assert max(firsts, default=0) < 700
        direct = sum(member(store, sys_q, "novel", i=i, n=n) for i in range(700))
        assert linrep_value(lr, n) == direct == len(firsts)
    assert a.params == ("i", "n")


def test_leading_zero_invariance(ctx):
    ctx.script("novel = twon")
    lr = ctx.runner.representations["novel"]
    row = np.array(lr.u, dtype=object).dot(lr.matrix(0))
    assert list(row) == list(lr.u)


def test_divergent_count_detected(qc):
    a = qc.define("unbounded", "n>=1 & i>=n").automaton
    with pytest.raises(DivergentCount):
        count_representation(a, "i", ("n",), qc.system)


small_matrices = st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2)


def _rep(u, m0, m1, v):
    return LinearRepresentation(tuple(u), {0: tuple(map(tuple, m0)), 1: tuple(map(tuple, m1))}, tuple(v))


def _words(max_len):
    out = [[]]
    for length in range(1, max_len + 1):
        out.extend([[(k >> b) & 1 for b in range(length)] for k in range(2 ** length)])
    return out


vec = st.lists(st.integers(-2, 2), min_size=2, max_size=2)


@given(vec, small_matrices, small_matrices, vec, vec, small_matrices, small_matrices, vec)
def test_linrep_equal_matches_brute_force(u1, a0, a1, v1, u2, b0, b1, v2):
    r1, r2 = _rep(u1, a0, a1, v1), _rep(u2, b0, b1, v2)
    # the difference has dimension 4, so words of length < 4 decide it
    same = all(r1.value_of_digits(w) == r2.value_of_digits(w) for w in _words(3))
    assert linrep_equal(r1, r2) == same


@given(vec, small_matrices, small_matrices, vec)
def test_linrep_equal_under_change_of_basis(u, m0, m1, v):
    r = _rep(u, m0, m1, v)
    P = np.array([[1, 1], [0, 1]], dtype=object)
    Pinv = np.array([[1, -1], [0, 1]], dtype=object)
    conj = lambda m: (Pinv.dot(np.array(m, dtype=object)).dot(P)).tolist()  # noqa: E731
    s = _rep(np.array(u, dtype=object).dot(P).tolist(), conj(m0), conj(m1),
             Pinv.dot(np.array(v, dtype=object)).tolist())
    assert linrep_equal(r, s)
