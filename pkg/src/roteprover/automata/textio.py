"""Plain-text exchange format for automata.

::

    tracks 2
    vars x y
    alphabet 0 1 2 3
    alphabet 0 1 2 3
    initial 0
    accepting 1 2
    0 (0,0) 0
    0 (1,0) 1
    output 0 1          # automata with output only

Only live transitions are listed.  The ``vars`` line is optional on input.
"""
from __future__ import annotations

from typing import TextIO

import numpy as np

from .core import AutomatonError, Dfa, Dfao, symbol_digits


def dumps(a: Dfa) -> str:
    lines = [f"tracks {len(a.tracks)}"]
    if a.tracks:
        lines.append("vars " + " ".join(a.tracks))
    for b in a.bases:
        lines.append("alphabet " + " ".join(str(d) for d in range(b)))
    lines.append(f"initial {a.initial}")
    lines.append("accepting " + " ".join(str(s) for s in np.flatnonzero(a.accepting)))
    digits = symbol_digits(a.bases)
    for s in range(a.n_states):
        for sym in np.flatnonzero(a.table[s] >= 0):
            col = ",".join(str(int(d)) for d in digits[sym])
            lines.append(f"{s} ({col}) {int(a.table[s, sym])}")
    if isinstance(a, Dfao):
        for s in range(a.n_states):
            lines.append(f"output {s} {int(a.labels[s])}")
    return "\n".join(lines) + "\n"


def dump(a: Dfa, fp: TextIO) -> None:
    fp.write(dumps(a))


def loads(text: str) -> Dfa:
    k = None
    names = None
    alphabets: list[list[int]] = []
    initial = 0
    accepting: list[int] = []
    edges: list[tuple[int, tuple[int, ...], int]] = []
    outputs: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "tracks":
                k = int(rest)
            elif head == "vars":
                names = rest.split()
            elif head == "alphabet":
                alphabets.append([int(x) for x in rest.split()])
            elif head == "initial":
                initial = int(rest)
            elif head == "accepting":
                accepting = [int(x) for x in rest.split()]
            elif head == "output":
                s, sym = rest.split()
                outputs[int(s)] = int(sym)
            else:
                src, col, dst = line.split()
                inner = col.strip("()")
                digits = tuple(int(x) for x in inner.split(",")) if inner else ()
                edges.append((int(src), digits, int(dst)))
        except ValueError as exc:
            raise AutomatonError(f"line {lineno}: cannot parse {raw!r}") from exc
    if k is None:
        raise AutomatonError("missing 'tracks' header")
    if len(alphabets) != k:
        raise AutomatonError(f"expected {k} alphabet lines, got {len(alphabets)}")
    for alpha in alphabets:
        if alpha != list(range(len(alpha))):
            raise AutomatonError("alphabets must be contiguous 0..d_max")
    bases = tuple(len(alpha) for alpha in alphabets)
    tracks = tuple(names) if names else tuple(f"x{i}" for i in range(k))
    states = {initial, *accepting, *outputs}
    for s, _, t in edges:
        states.update((s, t))
    n = max(states) + 1
    n_sym = int(np.prod(bases, dtype=np.int64)) if bases else 1
    table = np.full((n, n_sym), -1, dtype=np.int32)
    stride = 1
    strides = []
    for b in bases:
        strides.append(stride)
        stride *= b
    for s, digits, t in edges:
        if len(digits) != k:
            raise AutomatonError(f"transition column {digits} has wrong arity")
        sym = sum(d * m for d, m in zip(digits, strides))
        table[s, sym] = t
    if outputs:
        labels = np.array([outputs.get(s, 0) for s in range(n)])
        return Dfao(tracks, bases, table, labels, initial)
    labels = np.zeros(n, dtype=np.int32)
    labels[accepting] = 1
    return Dfa(tracks, bases, table, labels, initial)


def load(fp: TextIO) -> Dfa:
    return loads(fp.read())
