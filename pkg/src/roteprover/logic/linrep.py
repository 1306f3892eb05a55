"""Linear representations of counting functions.

A representation ``(u, mu, v)`` computes ``f(n) = u * mu[d1] * ... * mu[dk] * v``
for the digits ``d1..dk`` of ``n`` (most significant first).  Entries are
Python integers, so nothing overflows.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from ..automata import Dfa, symbol_digits
from ..numeration import NumerationSystem


class DivergentCount(ArithmeticError):
    """The counted variable is unbounded for some parameter value."""


@dataclass(frozen=True)
class LinearRepresentation:
    u: tuple[int, ...]
    mu: dict  # digit symbol -> tuple of rows
    v: tuple[int, ...]
    system: NumerationSystem | None = None
    params: tuple[str, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.u)

    def matrix(self, sym) -> np.ndarray:
        return np.array(self.mu[sym], dtype=object).reshape(self.dimension, self.dimension)

    def value_of_digits(self, symbols: Sequence[int]) -> int:
        row = np.array(self.u, dtype=object)
        for s in symbols:
            row = row.dot(self.matrix(s))
        return int(row.dot(np.array(self.v, dtype=object))) if self.dimension else 0

    def __hash__(self):
        return hash((self.u, self.v))


def _count_matrices(a: Dfa, counted: str, params: tuple[str, ...]):
    """mu[p][s, t] = number of counted digits e with T[s, (p, e)] = t."""
    pos = a.tracks.index(counted)
    digits = symbol_digits(a.bases)
    pbases = tuple(a.bases[a.tracks.index(p)] for p in params)
    n_param = int(np.prod(pbases, dtype=np.int64)) if pbases else 1
    pstr = np.ones(len(params), dtype=np.int64)
    for t in range(1, len(params)):
        pstr[t] = pstr[t - 1] * pbases[t - 1]
    psym = np.zeros(digits.shape[0], dtype=np.int64)
    for t, p in enumerate(params):
        psym += digits[:, a.tracks.index(p)] * pstr[t]
    n = a.n_states
    mats = np.zeros((n_param, n, n), dtype=np.int64)
    for sym in range(digits.shape[0]):
        targets = a.table[:, sym]
        src = np.flatnonzero(targets >= 0)
        np.add.at(mats[psym[sym]], (src, targets[src]), 1)
    # columns that are zero on every parameter but nonzero on the counted track
    leading = [sym for sym in range(digits.shape[0]) if psym[sym] == 0 and digits[sym, pos] != 0]
    return mats, leading


def count_representation(a: Dfa, counted: str, params: Sequence[str],
                         system: NumerationSystem | None = None) -> LinearRepresentation:
    """Representation of ``params -> #{counted : a accepts (params, counted)}``.

    Counted values are enumerated through their canonical representations:
    those longer than the parameters are read first with zero parameter
    digits, which is folded into the initial vector.
    """
    params = tuple(params)
    if set(a.tracks) != set(params) | {counted} or counted in params:
        raise ValueError(f"tracks {a.tracks} do not match parameters {params} and counted {counted!r}")
    mats, leading = _count_matrices(a, counted, params)
    n = a.n_states
    zero_col = [sym for sym in range(a.n_symbols) if not symbol_digits(a.bases)[sym].any()]
    if zero_col and a.table[a.initial, zero_col[0]] != a.initial:
        raise ValueError("the initial state must loop on the all-zero column")
    init = np.zeros(n, dtype=object)
    init[a.initial] = 1
    z = np.zeros(n, dtype=object)
    for sym in leading:
        t = a.table[a.initial, sym]
        if t >= 0:
            z[t] += 1
    N = mats[0].astype(object)
    u = init.copy()
    term = z
    for _ in range(n + 1):
        if not any(term):
            break
        u = u + term
        term = term.dot(N)
    else:
        raise DivergentCount("counted variable admits arbitrarily long values")
    v = tuple(int(x) for x in a.accepting)
    mu = {p: tuple(tuple(int(x) for x in row) for row in mats[p]) for p in range(mats.shape[0])}
    return LinearRepresentation(tuple(int(x) for x in u), mu, v, system, params)


def linrep_value(lr: LinearRepresentation, n, system: NumerationSystem | None = None) -> int:
    """Value at ``n`` (an integer, or a tuple of integers for several parameters)."""
    system = system or lr.system
    if system is None:
        raise ValueError("a numeration system is needed to represent n")
    values = n if isinstance(n, tuple) else (n,)
    if len(values) != max(1, len(lr.params)):
        raise ValueError(f"expected {len(lr.params)} parameter values")
    reps = [system.represent(x) for x in values]
    width = max(len(r) for r in reps)
    reps = [(0,) * (width - len(r)) + tuple(r) for r in reps]
    base = system.base
    symbols = []
    for col in zip(*reps):
        s, m = 0, 1
        for d in col:
            s += d * m
            m *= base
        symbols.append(s)
    return lr.value_of_digits(symbols)


def _reduce(vec: list[int], basis: list[tuple[int, list[int]]]) -> list[int]:
    """Fraction-free elimination of ``vec`` against an echelon basis."""
    for piv, b in basis:
        if vec[piv]:
            c, d = b[piv], vec[piv]
            vec = [c * x - d * y for x, y in zip(vec, b)]
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g > 1:
        vec = [x // g for x in vec]
    return vec


def _span_annihilates(u, mats, v) -> bool:
    """True iff every vector u * mu(w) is orthogonal to v."""
    basis: list[tuple[int, list[int]]] = []
    queue = [list(u)]
    while queue:
        vec = _reduce(queue.pop(), basis)
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            continue
        if sum(x * y for x, y in zip(vec, v)) != 0:
            return False
        basis.append((piv, vec))
        row = np.array(vec, dtype=object)
        for m in mats:
            queue.append(list(row.dot(m)))
    return True


def linrep_equal(a: LinearRepresentation, b: LinearRepresentation) -> bool:
    """Decide whether two representations compute the same function."""
    if set(a.mu) != set(b.mu):
        raise ValueError("representations read different digit alphabets")
    da, db = a.dimension, b.dimension
    u = list(a.u) + [-x for x in b.u]
    v = list(a.v) + list(b.v)
    mats = []
    for sym in sorted(a.mu):
        m = np.zeros((da + db, da + db), dtype=object)
        m[:da, :da] = a.matrix(sym)
        m[da:, da:] = b.matrix(sym)
        mats.append(m)
    return _span_annihilates(u, mats, v)
