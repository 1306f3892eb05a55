"""Deterministic automata over multi-track digit alphabets.

A symbol of a k-track automaton is a tuple of digits, one per track, encoded
as the integer ``sum(digit[t] * stride[t])`` with track 0 least significant.
Transition tables are dense ``int32`` arrays of shape (states, symbols) in
which ``-1`` stands for the implicit dead state.

Acceptors carry a 0/1 label per state; automata with output (:class:`Dfao`)
carry the output symbol as label.  Inputs are read most significant digit
first and every track is left-padded with zeros to a common length.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product as _cartesian
from typing import Callable, Sequence

import numpy as np

from .. import kernels

DEAD = -1


class AutomatonError(ValueError):
    """Incompatible tracks, alphabets or malformed automata."""


@lru_cache(maxsize=256)
def symbol_digits(bases: tuple[int, ...]) -> np.ndarray:
    """Digits of every symbol, shape (n_symbols, n_tracks)."""
    n = int(np.prod(bases, dtype=np.int64)) if bases else 1
    out = np.zeros((n, len(bases)), dtype=np.int64)
    sym = np.arange(n, dtype=np.int64)
    for t, b in enumerate(bases):
        out[:, t] = sym % b
        sym //= b
    out.setflags(write=False)
    return out


def strides(bases: Sequence[int]) -> np.ndarray:
    s = np.ones(len(bases), dtype=np.int64)
    for t in range(1, len(bases)):
        s[t] = s[t - 1] * bases[t - 1]
    return s


def encode(digits: Sequence[int], bases: Sequence[int]) -> int:
    sym = 0
    mult = 1
    for d, b in zip(digits, bases):
        if not 0 <= d < b:
            raise AutomatonError(f"digit {d} outside alphabet 0..{b - 1}")
        sym += d * mult
        mult *= b
    return sym


class Dfa:
    """Multi-track deterministic acceptor with an implicit dead state."""

    def __init__(self, tracks, bases, table, labels, initial: int = 0):
        self.tracks = tuple(tracks)
        self.bases = tuple(int(b) for b in bases)
        if len(self.tracks) != len(self.bases):
            raise AutomatonError("one base per track required")
        if len(set(self.tracks)) != len(self.tracks):
            raise AutomatonError(f"duplicate track names {self.tracks}")
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.labels = np.ascontiguousarray(labels, dtype=np.int32)
        self.initial = int(initial)
        n_sym = int(np.prod(self.bases, dtype=np.int64)) if self.bases else 1
        if self.table.ndim != 2 or self.table.shape[1] != n_sym:
            raise AutomatonError(f"table shape {self.table.shape} does not match {n_sym} symbols")
        if self.labels.shape != (self.table.shape[0],):
            raise AutomatonError("one label per state required")
        self.table.setflags(write=False)
        self.labels.setflags(write=False)

    # -- basic properties -------------------------------------------------
    @property
    def n_states(self) -> int:
        return self.table.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.table.shape[1]

    @property
    def accepting(self) -> np.ndarray:
        return self.labels != 0

    def __repr__(self):
        return f"{type(self).__name__}(tracks={self.tracks}, states={self.n_states})"

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.tracks == other.tracks
            and self.bases == other.bases
            and self.initial == other.initial
            and np.array_equal(self.table, other.table)
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self):
        return hash((self.tracks, self.bases, self.n_states, self.table.tobytes()[:4096]))

    def _with(self, table, labels, initial=0, tracks=None):
        return type(self)(tracks if tracks is not None else self.tracks, self.bases, table, labels, initial)

    # -- running ----------------------------------------------------------
    def step(self, state: int, digits: Sequence[int]) -> int:
        if state == DEAD:
            return DEAD
        return int(self.table[state, encode(digits, self.bases)])

    def final_state(self, columns: Sequence[Sequence[int]]) -> int:
        s = self.initial
        for col in columns:
            s = self.step(s, col)
            if s == DEAD:
                break
        return s

    def accepts(self, columns: Sequence[Sequence[int]]) -> bool:
        s = self.final_state(columns)
        return s != DEAD and bool(self.labels[s])

    def accepts_words(self, *words: Sequence[int]) -> bool:
        """Accept one digit string per track, left-padding them with zeros."""
        if len(words) != len(self.tracks):
            raise AutomatonError(f"expected {len(self.tracks)} words, got {len(words)}")
        return self.accepts(pad_columns(words))

    # -- language-level queries -------------------------------------------
    def reachable(self) -> np.ndarray:
        seen = np.zeros(self.n_states, dtype=bool)
        seen[self.initial] = True
        frontier = np.array([self.initial])
        while frontier.size:
            nxt = np.unique(self.table[frontier])
            nxt = nxt[nxt >= 0]
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return seen

    def coaccessible(self) -> np.ndarray:
        """States from which an accepting state can be reached."""
        n = self.n_states
        dst = self.table.reshape(-1)
        keep = np.flatnonzero(dst >= 0)
        order = np.argsort(dst[keep], kind="stable")
        preds = keep[order] // self.n_symbols  # sources grouped by target
        starts = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst[keep], minlength=n), out=starts[1:])
        live = self.accepting.copy()
        frontier = np.flatnonzero(live)
        while frontier.size:
            lo, hi = starts[frontier], starts[frontier + 1]
            sizes = hi - lo
            total = int(sizes.sum())
            if not total:
                break
            # concatenated ranges lo[i]..hi[i]
            offs = np.repeat(lo - np.cumsum(sizes) + sizes, sizes) + np.arange(total)
            cand = np.unique(preds[offs])
            frontier = cand[~live[cand]]
            live[frontier] = True
        return live

    def is_empty(self) -> bool:
        return not bool(self.coaccessible()[self.initial])

    def accepts_all(self, valid: "Dfa | None" = None) -> bool:
        """True iff every valid input is accepted.

        ``valid`` restricts the universe (typically the padded valid
        representations); without it the universe is every digit string.
        """
        universe = valid if valid is not None else full(self.tracks, self.bases)
        return combine([universe, self], lambda u, a: u & ~a, tracks=self.tracks).is_empty()

    # -- transformations ----------------------------------------------------
    def minimize(self) -> "Dfa":
        return minimize(self)

    def rename(self, mapping: dict[str, str]) -> "Dfa":
        return self._with(self.table, self.labels, self.initial, tuple(mapping.get(t, t) for t in self.tracks))

    def reorder(self, tracks: Sequence[str]) -> "Dfa":
        """Permute tracks into the given order (a pure relabelling of symbols)."""
        tracks = tuple(tracks)
        if sorted(tracks) != sorted(self.tracks):
            raise AutomatonError(f"cannot reorder {self.tracks} into {tracks}")
        if tracks == self.tracks:
            return self
        bases = tuple(self.bases[self.tracks.index(t)] for t in tracks)
        new_digits = symbol_digits(bases)
        old_strides = strides(self.bases)
        old_sym = np.zeros(new_digits.shape[0], dtype=np.int64)
        for pos, t in enumerate(tracks):
            old_sym += new_digits[:, pos] * old_strides[self.tracks.index(t)]
        return type(self)(tracks, bases, self.table[:, old_sym], self.labels, self.initial)


class Dfao(Dfa):
    """Single-track automaton whose state labels are output symbols."""

    def output(self, digits: Sequence[int]) -> int | None:
        """Output of the last state reached, or ``None`` on rejection."""
        s = self.final_state([(d,) for d in digits])
        return None if s == DEAD else int(self.labels[s])

    @property
    def accepting(self) -> np.ndarray:
        return np.ones(self.n_states, dtype=bool)


def pad_columns(words: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    width = max((len(w) for w in words), default=0)
    padded = [[0] * (width - len(w)) + list(w) for w in words]
    return list(zip(*padded)) if words else [()] * width


# -- constructors ---------------------------------------------------------

def full(tracks, bases) -> Dfa:
    n_sym = int(np.prod(bases, dtype=np.int64)) if bases else 1
    return Dfa(tracks, bases, np.zeros((1, n_sym)), [1])


def empty(tracks, bases) -> Dfa:
    n_sym = int(np.prod(bases, dtype=np.int64)) if bases else 1
    return Dfa(tracks, bases, np.full((1, n_sym), DEAD), [0])


def truth(value: bool) -> Dfa:
    return full((), ()) if value else empty((), ())


# -- minimization -------------------------------------------------------------

def _canonical_order(table: np.ndarray, initial: int) -> np.ndarray:
    """Breadth-first numbering from ``initial`` in symbol order; -1 if unreachable."""
    order = np.full(table.shape[0], -1, dtype=np.int64)
    order[initial] = 0
    queue = [initial]
    count = 1
    head = 0
    while head < len(queue):
        row = table[queue[head]]
        head += 1
        row = row[row >= 0]
        if not row.size:
            continue
        targets, first = np.unique(row, return_index=True)
        targets = targets[np.argsort(first)]
        fresh = targets[order[targets] < 0]
        order[fresh] = np.arange(count, count + fresh.size)
        count += fresh.size
        queue.extend(fresh.tolist())
    return order


def _quotient(table, labels, classes, initial):
    """Collapse states by class and renumber canonically."""
    n_classes = int(classes.max()) + 1
    rep = np.zeros(n_classes, dtype=np.int64)
    rep[classes[::-1]] = np.arange(len(classes))[::-1]
    ext = np.append(classes, -1)
    qtable = ext[table[rep]]
    qlabels = labels[rep]
    order = _canonical_order(qtable, int(classes[initial]))
    keep = np.flatnonzero(order >= 0)
    inv = np.empty(keep.size, dtype=np.int64)
    inv[order[keep]] = keep
    order_ext = np.append(order, -1)
    return order_ext[qtable[inv]], qlabels[inv]


def minimize(a: Dfa) -> Dfa:
    """Canonical minimal automaton: trimmed (acceptors only), merged and
    renumbered breadth-first, so equal languages give equal objects."""
    table, labels = a.table, a.labels
    if not isinstance(a, Dfao):
        live = a.coaccessible() & a.reachable()
        if not live[a.initial]:
            return empty(a.tracks, a.bases)
        labels = (labels != 0).astype(np.int32)
    else:
        live = a.reachable()
    idx = np.flatnonzero(live)
    # dead and unreachable targets map to -1 (index -1 is the padding slot)
    remap = np.full(a.n_states + 1, -1, dtype=np.int32)
    remap[idx] = np.arange(idx.size, dtype=np.int32)
    table = remap[table[idx]]
    labels = labels[idx]
    initial = int(remap[a.initial])
    classes = kernels.refine(table, labels)
    qtable, qlabels = _quotient(table, labels, classes, initial)
    return type(a)(a.tracks, a.bases, qtable, qlabels, 0)


# -- products -------------------------------------------------------------------

def _component_map(union_tracks, union_bases, comp: Dfa) -> np.ndarray:
    digits = symbol_digits(tuple(union_bases))
    s = strides(comp.bases)
    out = np.zeros(digits.shape[0], dtype=np.int64)
    for pos, t in enumerate(comp.tracks):
        u = union_tracks.index(t)
        if union_bases[u] != comp.bases[pos]:
            raise AutomatonError(f"alphabet mismatch on track {t!r}")
        out += digits[:, u] * s[pos]
    return out


def _required_components(fn, k: int) -> list[bool]:
    """Component i is required when the combined verdict is false whenever
    component i is in its dead state (label -1, i.e. rejecting)."""
    required = []
    for i in range(k):
        ok = True
        for bits in _cartesian([False, True], repeat=k - 1):
            vals = list(bits[:i]) + [False] + list(bits[i:])
            if bool(fn(*[np.array([v]) for v in vals])[0]):
                ok = False
                break
        required.append(ok)
    return required


def combine(
    parts: Sequence[Dfa],
    fn: Callable[..., np.ndarray],
    tracks: Sequence[str] | None = None,
    on_labels: bool = False,
    cls=Dfa,
) -> Dfa:
    """Synchronous product of several automata over the union of their tracks.

    ``fn`` receives one array per component and returns the acceptance
    array.  Components receive boolean acceptance unless ``on_labels`` is
    set, in which case they receive raw labels with -1 for the dead state.
    Components missing a track are lifted (that track is ignored by them).
    """
    if tracks is None:
        tracks = []
        for p in parts:
            tracks.extend(t for t in p.tracks if t not in tracks)
    tracks = tuple(tracks)
    bases = []
    for t in tracks:
        owners = [p.bases[p.tracks.index(t)] for p in parts if t in p.tracks]
        if not owners:
            raise AutomatonError(f"track {t!r} not carried by any component")
        if len(set(owners)) != 1:
            raise AutomatonError(f"alphabet mismatch on track {t!r}")
        bases.append(owners[0])
    for p in parts:
        if set(p.tracks) - set(tracks):
            raise AutomatonError(f"component tracks {p.tracks} not within {tracks}")
    bases = tuple(bases)
    k = len(parts)
    maps = [_component_map(tracks, bases, p) for p in parts]
    # per-component table with an explicit absorbing dead row at index n
    ext_tables = []
    for p, m in zip(parts, maps):
        t = np.where(p.table < 0, p.n_states, p.table).astype(np.int64)
        t = np.vstack([t, np.full((1, t.shape[1]), p.n_states)])
        ext_tables.append(t[:, m])
    radices = [p.n_states + 1 for p in parts]
    mult = np.ones(k, dtype=np.int64)
    for i in range(1, k):
        mult[i] = mult[i - 1] * radices[i - 1]
    if on_labels:
        required = [False] * k
    else:
        required = _required_components(fn, k)
    dead_index = [p.n_states for p in parts]

    start = sum(int(p.initial) * int(mult[i]) for i, p in enumerate(parts))
    ids: dict[int, int] = {start: 0}
    keys = [start]
    rows: list[np.ndarray] = []
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        comps = [(frontier // mult[i]) % radices[i] for i in range(k)]
        nxt = np.zeros((frontier.size, len(maps[0])), dtype=np.int64)
        dead = np.zeros(nxt.shape, dtype=bool)
        for i in range(k):
            ci = ext_tables[i][comps[i]]
            nxt += ci * mult[i]
            if required[i]:
                dead |= ci == dead_index[i]
        nxt[dead] = -1
        uniq, inverse = np.unique(nxt, return_inverse=True)
        uid = np.empty(uniq.size, dtype=np.int64)
        fresh = []
        for j, key in enumerate(uniq.tolist()):
            if key < 0:
                uid[j] = -1
                continue
            got = ids.get(key)
            if got is None:
                got = len(keys)
                ids[key] = got
                keys.append(key)
                fresh.append(key)
            uid[j] = got
        rows.append(uid[inverse.reshape(nxt.shape)])
        frontier = np.array(fresh, dtype=np.int64)
    table = np.vstack(rows)
    keys_arr = np.array(keys, dtype=np.int64)
    comp_states = [(keys_arr // mult[i]) % radices[i] for i in range(k)]
    args = []
    for i, p in enumerate(parts):
        lab = np.append(p.labels, -1)[comp_states[i]]
        args.append(lab if on_labels else lab > 0)
    labels = np.asarray(fn(*args)).astype(np.int32)
    return cls(tracks, bases, table, labels, 0)


def product(a: Dfa, b: Dfa, op: str = "and") -> Dfa:
    ops = {
        "and": lambda x, y: x & y,
        "or": lambda x, y: x | y,
        "minus": lambda x, y: x & ~y,
        "xor": lambda x, y: x ^ y,
    }
    try:
        fn = ops[op]
    except KeyError:
        raise AutomatonError(f"unknown connective {op!r}") from None
    return minimize(combine([a, b], fn))


# -- projection -------------------------------------------------------------------

def _csr(src: np.ndarray, sym: np.ndarray, dst: np.ndarray, n: int, nred: int):
    """CSR successor lists from edge arrays, duplicates removed."""
    key = src.astype(np.int64) * nred + sym
    order = np.lexsort((dst, key))
    key, dst = key[order], dst[order]
    keep = np.ones(key.size, dtype=bool)
    keep[1:] = (key[1:] != key[:-1]) | (dst[1:] != dst[:-1])
    key, dst = key[keep], dst[keep]
    indptr = np.zeros(n * nred + 1, dtype=np.int64)
    np.cumsum(np.bincount(key, minlength=n * nred), out=indptr[1:])
    return indptr, dst.astype(np.int32)


def _edges(trans: np.ndarray):
    """Edge arrays (source, reduced symbol, target) of a (states, symbols, digits) table."""
    n, nred, d = trans.shape
    src = np.repeat(np.arange(n, dtype=np.int64), nred * d)
    sym = np.tile(np.repeat(np.arange(nred, dtype=np.int64), d), n)
    dst = trans.reshape(-1).astype(np.int64)
    live = dst >= 0
    return src[live], sym[live], dst[live]


def project(a: Dfa, track: str) -> Dfa:
    """Existentially quantify ``track``.

    Witnesses whose representation is longer than the remaining tracks are
    handled by making every state reachable through columns that are zero on
    the remaining tracks an initial state of the subset construction.
    """
    if track not in a.tracks:
        raise AutomatonError(f"no track {track!r} in {a.tracks}")
    pos = a.tracks.index(track)
    rest = tuple(t for t in a.tracks if t != track)
    rest_bases = tuple(b for t, b in zip(a.tracks, a.bases) if t != track)
    d = a.bases[pos]
    old = strides(a.bases)
    rdigits = symbol_digits(rest_bases)
    base_sym = np.zeros(rdigits.shape[0], dtype=np.int64)
    for rp, t in enumerate(rest):
        base_sym += rdigits[:, rp] * old[a.tracks.index(t)]
    # idx[r, e]: full symbol for reduced symbol r and projected digit e
    idx = base_sym[:, None] + np.arange(d, dtype=np.int64)[None, :] * old[pos]

    zero_cols = a.table[:, idx[0]]
    start = {a.initial}
    stack = [a.initial]
    while stack:
        s = stack.pop()
        for t in zero_cols[s].tolist():
            if t >= 0 and t not in start:
                start.add(t)
                stack.append(t)

    trans = np.ascontiguousarray(a.table[:, idx])  # (states, reduced symbols, projected digit)
    n, n_red, _ = trans.shape
    indptr, indices = _csr(*_edges(trans), n, n_red)
    table, labels = kernels.subset_construction(indptr, indices, n_red, sorted(start), a.accepting)
    return minimize(Dfa(rest, rest_bases, table, labels, 0))


class Nfa:
    """Nondeterministic automaton: ``delta[state][symbol]`` is a set of states."""

    def __init__(self, tracks, bases, delta, initial, accepting):
        self.tracks = tuple(tracks)
        self.bases = tuple(bases)
        self.delta = [dict(row) for row in delta]
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)

    @classmethod
    def from_dfa(cls, a: Dfa) -> "Nfa":
        delta = [
            {sym: {int(t)} for sym, t in enumerate(row) if t >= 0}
            for row in a.table
        ]
        return cls(a.tracks, a.bases, delta, {a.initial}, set(np.flatnonzero(a.accepting).tolist()))

    def accepts(self, columns) -> bool:
        current = set(self.initial)
        for col in columns:
            sym = encode(col, self.bases)
            current = {t for s in current for t in self.delta[s].get(sym, ())}
        return bool(current & self.accepting)

    def determinize(self) -> Dfa:
        n_sym = int(np.prod(self.bases, dtype=np.int64)) if self.bases else 1
        ids = {self.initial: 0}
        order = [self.initial]
        rows = []
        head = 0
        while head < len(order):
            S = order[head]
            head += 1
            row = []
            for sym in range(n_sym):
                T = frozenset(t for s in S for t in self.delta[s].get(sym, ()))
                if not T:
                    row.append(-1)
                    continue
                if T not in ids:
                    ids[T] = len(order)
                    order.append(T)
                row.append(ids[T])
            rows.append(row)
        labels = [1 if S & self.accepting else 0 for S in order]
        return Dfa(self.tracks, self.bases, np.array(rows).reshape(len(rows), n_sym), labels, 0)


def determinize_minimize(a: "Nfa | Dfa") -> Dfa:
    if isinstance(a, Nfa):
        a = a.determinize()
    return minimize(a)


# -- operations relative to a language of valid representations ---------------

def _addressing_copies(addressing: Dfa, tracks) -> list[Dfa]:
    if len(addressing.tracks) != 1:
        raise AutomatonError("addressing automaton must have exactly one track")
    return [addressing.rename({addressing.tracks[0]: t}) for t in tracks]


def valid(tracks, addressing: Dfa) -> Dfa:
    """Tuples of digit strings in which every track is a valid representation."""
    tracks = tuple(tracks)
    if not tracks:
        return full((), ())
    parts = _addressing_copies(addressing, tracks)
    return minimize(combine(parts, lambda *v: np.logical_and.reduce(v), tracks=tracks))


def complement(a: Dfa, addressing: Dfa | None = None) -> Dfa:
    """Valid tuples rejected by ``a``.

    Without ``addressing`` every digit string counts as valid.
    """
    if addressing is None:
        parts = [a]
    else:
        parts = [a] + _addressing_copies(addressing, a.tracks)
    return minimize(
        combine(parts, lambda x, *v: ~x & np.logical_and.reduce([np.ones_like(x)] + list(v)), tracks=a.tracks)
    )


def lift(a: Dfa, tracks, addressing: Dfa | None = None) -> Dfa:
    """Cylindrify ``a`` to ``tracks``: new tracks range over valid representations."""
    tracks = tuple(tracks)
    extra = [t for t in tracks if t not in a.tracks]
    if not extra:
        return a.reorder(tracks) if tracks != a.tracks else a
    if addressing is None:
        raise AutomatonError("lifting needs an addressing automaton or matching tracks")
    parts = [a] + _addressing_copies(addressing, extra)
    return minimize(combine(parts, lambda *v: np.logical_and.reduce(v), tracks=tracks))
