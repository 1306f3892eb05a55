import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from roteprover import _fallback, kernels

compiled = pytest.mark.skipif(kernels.BACKEND != "compiled", reason="extension not built")


@st.composite
def nfas(draw):
    n = draw(st.integers(1, 9))
    nred = draw(st.integers(1, 3))
    lists = [sorted(set(draw(st.lists(st.integers(0, n - 1), max_size=3)))) for _ in range(n * nred)]
    indptr = np.cumsum([0] + [len(x) for x in lists])
    indices = np.array([v for x in lists for v in x], dtype=np.int64)
    start = sorted(set(draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=3))))
    accepting = np.array(draw(st.lists(st.booleans(), min_size=n, max_size=n)))
    return indptr, indices, nred, np.array(start), accepting


@st.composite
def dfas(draw):
    n = draw(st.integers(1, 12))
    k = draw(st.integers(1, 3))
    table = np.array(draw(st.lists(st.integers(-1, n - 1), min_size=n * k, max_size=n * k)),
                     dtype=np.int32).reshape(n, k)
    labels = np.array(draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)), dtype=np.int32)
    return table, labels


def same_partition(a, b):
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))


@compiled
@given(nfas())
def test_subset_construction_backends_agree(nfa):
    t1, l1 = kernels._kernels.subset_construction(*nfa, 10_000)
    t2, l2 = _fallback.subset_construction(*nfa, 10_000)
    assert np.array_equal(t1, t2) and np.array_equal(l1, l2)


@compiled
@given(dfas())
def test_refine_backends_agree(dfa):
    assert same_partition(kernels._kernels.refine(*dfa), _fallback.refine(*dfa))


@given(dfas())
def test_refine_is_a_congruence(dfa):
    table, labels = dfa
    cls = kernels.refine(table, labels)
    ext = np.append(cls, -1)
    for s in range(len(cls)):
        for t in range(len(cls)):
            if cls[s] == cls[t]:
                assert labels[s] == labels[t]
                assert (ext[table[s]] == ext[table[t]]).all()


@compiled
@pytest.mark.parametrize("num, den, strict, first_fixed", [
    (5, 2, True, True), (5, 2, False, True), (7, 3, False, False), (3, 1, True, True)])
def test_search_backends_agree(num, den, strict, first_fixed):
    a = kernels._kernels.search(num, den, strict, 45, first_fixed, True, 0)
    b = _fallback.search(num, den, strict, 45, first_fixed, True, 0)
    assert list(a[0]) == list(b[0])
    assert sorted(a[1]) == sorted(b[1])
    assert a[2:] == b[2:]


def test_subset_limit_raises():
    # two states, two letters, every letter goes everywhere
    with pytest.raises(MemoryError):
        kernels.subset_construction(np.array([0, 1, 2, 3, 4]), np.array([0, 1, 0, 1]), 2,
                                    np.array([0]), np.array([True, False]), 0)


def test_pure_switch():
    env = dict(os.environ, ROTEPROVER_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from roteprover import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
