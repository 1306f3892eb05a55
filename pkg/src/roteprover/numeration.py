"""Dumont-Thomas numeration systems built from morphisms.

A system is an addressing automaton whose transitions carry integer
sequences satisfying one shared linear recurrence.  The value of a digit
string read from the initial state is the sum, over its positions, of the
transition sequence evaluated at the number of digits that follow.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np
import sympy

from .automata import Dfa, Dfao, minimize
from .automata.core import strides
from .words import Morphism, WordError, apply_morphism


class NumerationError(ValueError):
    """Invalid construction or representation."""


class SynthesisError(RuntimeError):
    """Addition synthesis exceeded its safety bound."""


@dataclass(frozen=True)
class Recurrence:
    """u[n+r] = c1*u[n+r-1] + ... + cr*u[n]."""

    coefficients: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_polynomial(cls, coeffs) -> "Recurrence":
        """From monic polynomial coefficients, highest degree first."""
        coeffs = [int(c) for c in coeffs]
        if coeffs[0] != 1:
            raise NumerationError("characteristic polynomial must be monic")
        return cls(tuple(-c for c in coeffs[1:]))

    @property
    def polynomial(self) -> tuple[int, ...]:
        return (1,) + tuple(-c for c in self.coefficients)

    def polynomial_str(self, var: str = "X") -> str:
        X = sympy.Symbol(var)
        expr = sum(c * X ** (self.order - i) for i, c in enumerate(self.polynomial))
        return str(sympy.Poly(expr, X).as_expr()).replace("**", "^")

    def times_x(self) -> "Recurrence":
        return Recurrence(self.coefficients + (0,))

    def extend(self, initial, length: int) -> list[int]:
        values = [int(v) for v in initial]
        if len(values) < self.order:
            raise NumerationError(f"need {self.order} initial values, got {len(values)}")
        while len(values) < length:
            values.append(sum(c * values[-1 - i] for i, c in enumerate(self.coefficients)))
        return values[:length]

    def satisfied_by(self, values) -> bool:
        r = self.order
        return all(
            values[n + r] == sum(c * values[n + r - 1 - i] for i, c in enumerate(self.coefficients))
            for n in range(len(values) - r)
        )

    def companion(self) -> np.ndarray:
        """F with (u[n], ..., u[n+r-1]) @ F == (u[n+1], ..., u[n+r])."""
        r = self.order
        F = np.zeros((r, r), dtype=np.int64)
        for j in range(1, r):
            F[j, j - 1] = 1
        for i, c in enumerate(self.coefficients):
            F[r - 1 - i, r - 1] = c
        return F

    def dominant_root_interval(self, width: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
        """Rational isolating interval of the largest real root."""
        X = sympy.Symbol("X")
        poly = sympy.Poly(list(self.polynomial), X)
        lo, hi = max(poly.intervals(eps=sympy.Rational(width.numerator, width.denominator)))[0]
        return Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))


def char_recurrence(matrix) -> Recurrence:
    """Cayley-Hamilton: the characteristic polynomial of the incidence matrix."""
    M = sympy.Matrix(matrix)
    if M.rows != M.cols:
        raise NumerationError("incidence matrix must be square")
    return Recurrence.from_polynomial(M.charpoly().all_coeffs())


@dataclass(frozen=True)
class Transition:
    source: str
    digit: int
    target: str
    initial: tuple[int, ...]


@dataclass
class NumerationSystem:
    """Sequence automaton plus recurrence.

    ``states[0]`` is the initial state.  All states are final.
    """

    name: str
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    recurrence: Recurrence
    morphism: Morphism | None = None
    default_outputs: dict[str, int] | None = None
    _seq_cache: dict = field(default_factory=dict, repr=False)
    _cap_cache: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._out: dict[str, dict[int, Transition]] = {s: {} for s in self.states}
        for t in self.transitions:
            if t.source not in self._out or t.target not in self._out:
                raise NumerationError(f"transition {t} uses an unknown state")
            if t.digit in self._out[t.source]:
                raise NumerationError(f"nondeterministic digit {t.digit} at {t.source}")
            if len(t.initial) != self.recurrence.order:
                raise NumerationError(f"transition {t} needs {self.recurrence.order} initial values")
            self._out[t.source][t.digit] = t
        zero = self._out[self.initial].get(0)
        if zero is None or zero.target != self.initial or any(zero.initial):
            raise NumerationError("the initial state needs a null 0-loop")

    @property
    def initial(self) -> str:
        return self.states[0]

    @property
    def base(self) -> int:
        return max(t.digit for t in self.transitions) + 1

    def out(self, state: str) -> dict[int, Transition]:
        return self._out[state]

    # -- sequences ------------------------------------------------------------
    def sequence_values(self, transition: Transition, k: int) -> int:
        key = (transition.source, transition.digit)
        vals = self._seq_cache.get(key)
        if vals is None or len(vals) <= k:
            vals = self.recurrence.extend(transition.initial, max(k + 1, 2 * len(vals or ()), 16))
            self._seq_cache[key] = vals
        return vals[k]

    def sequence(self, source: str, digit: int, length: int) -> list[int]:
        t = self._out[source][digit]
        return [self.sequence_values(t, k) for k in range(length)]

    # -- representations ---------------------------------------------------------
    def _capacity(self, state: str, m: int) -> int:
        """Number of digit strings of length m readable from ``state``."""
        caps = self._cap_cache
        if not caps:
            caps.append({s: 1 for s in self.states})
        while len(caps) <= m:
            prev = caps[-1]
            caps.append({s: sum(prev[t.target] for t in self._out[s].values()) for s in self.states})
        return caps[m][state]

    def evaluate(self, digits) -> int:
        digits = _as_digits(digits)
        state = self.initial
        total = 0
        for pos, d in enumerate(digits):
            t = self._out[state].get(d)
            if t is None:
                raise NumerationError(f"{digits} is not a path of {self.name}")
            total += self.sequence_values(t, len(digits) - 1 - pos)
            state = t.target
        return total

    def state_of(self, digits) -> str:
        state = self.initial
        for d in _as_digits(digits):
            t = self._out[state].get(d)
            if t is None:
                raise NumerationError(f"{digits} is not a path of {self.name}")
            state = t.target
        return state

    def represent(self, n: int) -> tuple[int, ...]:
        """Canonical (leading-zero free) representation of n."""
        if n < 0:
            raise NumerationError("only natural numbers are represented")
        length = 0
        while self._capacity(self.initial, length) <= n:
            length += 1
        state, rem, out = self.initial, n, []
        for pos in range(length - 1, -1, -1):
            for d in sorted(self._out[state], reverse=True):
                t = self._out[state][d]
                v = self.sequence_values(t, pos)
                if v <= rem and rem - v < self._capacity(t.target, pos):
                    out.append(d)
                    rem -= v
                    state = t.target
                    break
            else:
                raise NumerationError(f"greedy representation of {n} failed at position {pos}")
        if rem:
            raise NumerationError(f"greedy representation of {n} left remainder {rem}")
        return tuple(out)

    def represent_str(self, n: int) -> str:
        return digits_str(self.represent(n))

    def radix_order(self, count: int):
        """First ``count`` canonical words of the language in radix order."""
        produced = 0
        length = 0
        while produced < count:
            for word in self._words_of_length(length):
                yield word
                produced += 1
                if produced == count:
                    return
            length += 1

    def _words_of_length(self, length: int):
        if length == 0:
            yield ()
            return
        def rec(state, prefix, left):
            if left == 0:
                yield prefix
                return
            for d in sorted(self._out[state]):
                if not prefix and d == 0:
                    continue
                t = self._out[state][d]
                if self._capacity(t.target, left - 1) == 0:
                    continue
                yield from rec(t.target, prefix + (d,), left - 1)
        yield from rec(self.initial, (), length)

    # -- automata ------------------------------------------------------------------
    @cached_property
    def addressing(self) -> Dfa:
        index = {s: i for i, s in enumerate(self.states)}
        table = np.full((len(self.states), self.base), -1, dtype=np.int32)
        for t in self.transitions:
            table[index[t.source], t.digit] = index[t.target]
        return Dfa(("x",), (self.base,), table, np.ones(len(self.states)), 0)

    def dfao(self, outputs: dict[str, int] | None = None) -> Dfao:
        return dfao_of(self, outputs if outputs is not None else self.default_outputs)

    def constant(self, c: int, track: str = "x") -> Dfa:
        return constant_recognizer(self, c, track)

    @cached_property
    def addition(self) -> Dfa:
        return synthesize_addition(self)

    def export(self) -> str:
        """Sequence automaton in the automata text format plus sequence lines."""
        lines = [
            "tracks 1",
            "alphabet " + " ".join(str(d) for d in range(self.base)),
            "initial 0",
            "accepting " + " ".join(str(i) for i in range(len(self.states))),
        ]
        index = {s: i for i, s in enumerate(self.states)}
        for t in sorted(self.transitions, key=lambda t: (index[t.source], t.digit)):
            lines.append(f"{index[t.source]} ({t.digit}) {index[t.target]}")
        for t in sorted(self.transitions, key=lambda t: (index[t.source], t.digit)):
            lines.append(f"seq {index[t.source]} ({t.digit}) " + " ".join(map(str, t.initial)))
        lines.append("recurrence " + " ".join(map(str, self.recurrence.coefficients)))
        lines.append("states " + " ".join(self.states))
        return "\n".join(lines) + "\n"


def _as_digits(digits) -> tuple[int, ...]:
    if isinstance(digits, str):
        return tuple(int(c) for c in digits)
    return tuple(int(d) for d in digits)


def digits_str(digits) -> str:
    return "".join(str(d) for d in digits)


# -- constructions ------------------------------------------------------------------

def _lengths(matrix, weights, k: int) -> list[list[int]]:
    """Row n holds |phi(h^n(x))| for each letter x, where weights give |phi(x)|."""
    M = [list(map(int, row)) for row in matrix]
    cur = list(weights)
    rows = [cur]
    for _ in range(k - 1):
        cur = [sum(M[x][y] * cur[y] for y in range(len(cur))) for x in range(len(cur))]
        rows.append(cur)
    return rows


def dt_from_morphism(m: Morphism, seed: str | None = None, name: str = "dt") -> NumerationSystem:
    """Dumont-Thomas system of a morphism prolongable on ``seed``."""
    seed = seed if seed is not None else m.alphabet[0]
    image = m.images.get(seed)
    if image is None or len(image) < 2 or image[0] != seed:
        raise NumerationError(f"morphism is not prolongable on {seed!r}")
    letters = [seed] + [x for x in m.alphabet if x != seed]
    for x in letters:
        if set(m[x]) - set(letters):
            raise NumerationError(f"image of {x!r} leaves the alphabet")
    matrix = m.incidence_matrix(letters)
    rec = char_recurrence(matrix)
    lengths = _lengths(matrix, [1] * len(letters), rec.order)
    pos = {x: i for i, x in enumerate(letters)}
    transitions = []
    for x in letters:
        for d, y in enumerate(m[x]):
            init = tuple(sum(lengths[k][pos[z]] for z in m[x][:d]) for k in range(rec.order))
            transitions.append(Transition(x, d, y, init))
    outputs = {x: i for i, x in enumerate(sorted(letters))}
    return NumerationSystem(name, tuple(letters), tuple(transitions), rec, morphism=m, default_outputs=outputs)


def inflate_for_image(
    sys: NumerationSystem, g: Morphism, gprime: Morphism, gsecond: Morphism, name: str = "dt_image"
) -> NumerationSystem:
    """System addressing the letters of g(x) where x is the fixed point of ``sys``.

    ``gprime`` marks each letter followed by |g(letter)| - 1 filler letters
    and ``gsecond`` maps that inflated word onto g(x).  Original digits are
    scaled by the longest g'-image so radix order is preserved; every
    transition into a letter is replicated by increment digits that lead to
    a terminal state carrying the filler's output.
    """
    m = sys.morphism
    if m is None:
        raise NumerationError("inflation needs a system built from a morphism")
    letters = list(sys.states)
    for x in letters:
        if x not in g.images or x not in gprime.images:
            raise NumerationError(f"letter {x!r} missing from g or g'")
        if gprime[x][0] != x or len(gprime[x]) != len(g[x]):
            raise NumerationError(f"g'({x}) must be {x} followed by |g({x})|-1 fillers")
        if apply_morphism(gsecond, gprime[x]) != g[x]:
            raise NumerationError(f"g''(g'({x})) differs from g({x})")
    scale = max(len(gprime[x]) for x in letters)
    rec = sys.recurrence.times_x()
    matrix = m.incidence_matrix(letters)
    lengths = _lengths(matrix, [len(g[x]) for x in letters], rec.order)
    pos = {x: i for i, x in enumerate(letters)}

    sinks: list[str] = []
    for x in letters:
        for filler in gprime[x][1:]:
            out = gsecond[filler]
            if out not in sinks:
                sinks.append(out)
    if set(sinks) & set(letters):
        raise NumerationError("filler outputs collide with letter names")

    transitions = []
    for t in sys.transitions:
        prefix = m[t.source][: t.digit]
        init = [sum(lengths[k][pos[z]] for z in prefix) for k in range(rec.order)]
        transitions.append(Transition(t.source, t.digit * scale, t.target, tuple(init)))
        for i, filler in enumerate(gprime[t.target][1:], start=1):
            bumped = (init[0] + i,) + tuple(init[1:])
            transitions.append(Transition(t.source, t.digit * scale + i, gsecond[filler], bumped))
    outputs = {x: int(gsecond[x]) for x in letters}
    outputs.update({s: int(s) for s in sinks})
    return NumerationSystem(name, tuple(letters + sinks), tuple(transitions), rec, morphism=m, default_outputs=outputs)


def dfao_of(sys: NumerationSystem, outputs: dict[str, int]) -> Dfao:
    if outputs is None:
        raise NumerationError("no output map given")
    missing = [s for s in sys.states if s not in outputs]
    if missing:
        raise NumerationError(f"missing outputs for states {missing}")
    a = sys.addressing
    return Dfao(a.tracks, a.bases, a.table, [int(outputs[s]) for s in sys.states], 0)


def constant_recognizer(sys: NumerationSystem, c: int, track: str = "x") -> Dfa:
    """Padded representations of the constant ``c``."""
    rep = sys.represent(c)
    n = len(rep) + 1
    table = np.full((n, sys.base), -1, dtype=np.int32)
    table[0, 0] = 0
    for i, d in enumerate(rep):
        table[i, d] = i + 1
    labels = np.zeros(n, dtype=np.int32)
    labels[-1] = 1
    return minimize(Dfa((track,), (sys.base,), table, labels, 0))


# -- addition ------------------------------------------------------------------------

@dataclass(frozen=True)
class _Carry:
    """Geometry of the difference vectors D (row vectors, D -> D @ F + delta).

    ``r`` is the dominant right eigenvector of F: once ``|D @ r|`` exceeds
    ``bound`` the final value can no longer reach the target and its sign is
    that of ``(D @ r) * weight``.  ``radius`` bounds every coordinate of a
    kept D, which lets states be packed into int64 keys.
    """

    r: np.ndarray
    bound: float
    weight: float
    radius: np.ndarray


def _carry_geometry(F: np.ndarray, deltas: np.ndarray, constant: int = 0) -> _Carry:
    lam, R = np.linalg.eig(F.astype(float))
    mods = np.abs(lam)
    dom = int(np.argmax(mods))
    theta = lam[dom]
    if abs(theta.imag) > 1e-9 or theta.real <= 1:
        raise SynthesisError("dominant root is not a real number > 1")
    others = [j for j in range(len(lam)) if j != dom]
    if any(mods[j] >= 1 - 1e-9 for j in others):
        raise SynthesisError("recurrence is not (ultimately) Pisot")
    col = R[:, dom] / R[np.argmax(np.abs(R[:, dom])), dom]
    R = R.copy()
    R[:, dom] = col
    e0 = np.zeros(len(lam), dtype=complex)
    e0[0] = 1.0
    beta = np.linalg.solve(R, e0)
    spread = np.abs(deltas.astype(float) @ R).max(axis=0)
    bound = spread[dom] / (theta.real - 1)
    ymax = np.zeros(len(lam))
    for j in others:
        ymax[j] = spread[j] / (1 - mods[j])
        bound += abs(beta[j] / beta[dom]) * 2 * ymax[j]
    bound += abs(constant / beta[dom])
    # generous slack: float error must never prune a live state
    bound = float(bound * 1.5 + 1e-6)
    ymax[dom] = bound
    radius = np.abs(np.linalg.inv(R)).T @ ymax * 1.5 + 2
    return _Carry(col.real, bound, float(beta[dom].real), np.ceil(radius).astype(np.int64))


def synthesize_linear(sys: NumerationSystem, coefficients, constant: int = 0, op: str = "=",
                      max_states: int = 5_000_000) -> Dfa:
    """Automaton for ``sum(c_k * x_k) op constant`` with ``op`` one of
    ``=``, ``!=``, ``<=``; tracks are named ``x0, x1, ...``.

    Reading columns most significant first, the state holds the addressing
    state of each track and the integer vector D such that the value of the
    linear form, once m more digits are read, is D @ F^m @ e0 plus the value
    of the remaining digits.  Once the dominant coordinate of D leaves the
    cancellable range the comparison is decided: the state is dropped or
    replaced by an accepting sink that only checks validity.
    """
    if op not in ("=", "!=", "<="):
        raise SynthesisError(f"unsupported comparison {op!r}")
    coefficients = tuple(int(c) for c in coefficients)
    k = len(coefficients)
    F = sys.recurrence.companion().astype(np.int64)
    r = sys.recurrence.order
    index = {s: i for i, s in enumerate(sys.states)}
    n_st = len(sys.states)
    moves = [
        [(t.digit, index[t.target], np.array(t.initial, dtype=np.int64)) for t in sys.out(s).values()]
        for s in sys.states
    ]
    vectors = np.unique(np.array([v for ms in moves for _, _, v in ms]), axis=0)
    deltas = np.zeros((1, r), dtype=np.int64)
    for c in coefficients:
        deltas = np.unique((deltas[:, None, :] + c * vectors[None, :, :]).reshape(-1, r), axis=0)
    geo = _carry_geometry(F, deltas, constant)

    base = sys.base
    # every tuple of addressing states: the synchronized moves out of it
    combos = []
    for code in range(n_st**k):
        states = [(code // n_st**t) % n_st for t in range(k)]
        sym, tgt, delta = [], [], []
        for combo in product(*(moves[s] for s in states)):
            sym.append(sum(mv[0] * base**t for t, mv in enumerate(combo)))
            tgt.append(sum(mv[1] * n_st**t for t, mv in enumerate(combo)))
            delta.append(sum((c * mv[2] for c, mv in zip(coefficients, combo)), np.zeros(r, dtype=np.int64)))
        combos.append((np.array(sym, dtype=np.int64), np.array(tgt, dtype=np.int64),
                       np.array(delta, dtype=np.int64).reshape(-1, r)))

    radix = 2 * geo.radius + 1
    dmult = np.ones(r, dtype=np.int64)
    for t in range(1, r):
        dmult[t] = dmult[t - 1] * radix[t - 1]
    dspan = int(dmult[-1] * radix[-1])
    if dspan * n_st**k * 2 >= 2**62:
        raise SynthesisError("difference vectors too large to pack")

    def pack(code, flag, D):
        return ((flag * n_st**k + code) * dspan) + ((D + geo.radius) * dmult).sum(axis=-1)

    def accept(flag, D):
        if op == "=":
            ok = D[:, 0] == constant
        elif op == "!=":
            ok = D[:, 0] != constant
        else:
            ok = D[:, 0] <= constant
        return (flag == 1) | ok

    init = index[sys.initial]
    code0 = sum(init * n_st**t for t in range(k))
    f_code = np.array([code0], dtype=np.int64)
    f_flag = np.zeros(1, dtype=np.int64)
    f_D = np.zeros((1, r), dtype=np.int64)
    seen_keys = pack(f_code, f_flag, f_D)
    seen_ids = np.zeros(1, dtype=np.int64)
    labels = [accept(f_flag, f_D)]
    rows = []
    total = 1
    while f_code.size:
        g = f_code.size
        row = np.full((g, base**k), -1, dtype=np.int64)
        c_pos, c_sym, c_code, c_flag, c_D = [], [], [], [], []
        DF = f_D @ F
        for code in np.unique(f_code).tolist():
            sym, tgt, delta = combos[code]
            if not sym.size:
                continue
            sel = np.flatnonzero(f_code == code)
            m = sym.size
            nd = DF[sel][:, None, :] + delta[None, :, :]
            flag = np.broadcast_to(f_flag[sel][:, None], (sel.size, m)).copy()
            y = nd @ geo.r
            out = (np.abs(y) > geo.bound) & (flag == 0)
            if op == "=":
                dead = out
            elif op == "!=":
                dead = np.zeros_like(out)
            else:
                dead = out & (y * geo.weight > 0)
            flag[out & ~dead] = 1
            nd[flag == 1] = 0
            keep = ~dead
            pos = np.broadcast_to(sel[:, None], (sel.size, m))[keep]
            c_pos.append(pos)
            c_sym.append(np.broadcast_to(sym[None, :], (sel.size, m))[keep])
            c_code.append(np.broadcast_to(tgt[None, :], (sel.size, m))[keep])
            c_flag.append(flag[keep])
            c_D.append(nd[keep])
        if not c_pos:
            rows.append(row)
            break
        pos, sym = np.concatenate(c_pos), np.concatenate(c_sym)
        code, flag, D = np.concatenate(c_code), np.concatenate(c_flag), np.concatenate(c_D)
        if np.any(np.abs(D) > geo.radius):
            raise SynthesisError("difference vector escaped its bounding box")
        keys = pack(code, flag, D)
        uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        at = np.searchsorted(seen_keys, uniq)
        at_c = np.minimum(at, seen_keys.size - 1)
        found = seen_keys[at_c] == uniq
        ids = np.empty(uniq.size, dtype=np.int64)
        ids[found] = seen_ids[at_c[found]]
        fresh = np.flatnonzero(~found)
        ids[fresh] = total + np.arange(fresh.size)
        total += fresh.size
        if total > max_states:
            raise SynthesisError(f"carry exploration exceeded {max_states} states")
        row[pos, sym] = ids[inverse.reshape(-1)]
        rows.append(row)
        merged = np.concatenate([seen_keys, uniq[fresh]])
        order = np.argsort(merged, kind="stable")
        seen_keys = merged[order]
        seen_ids = np.concatenate([seen_ids, ids[fresh]])[order]
        src = first[fresh]
        f_code, f_flag, f_D = code[src], flag[src], D[src]
        labels.append(accept(f_flag, f_D))
    table = np.vstack(rows)
    labels = np.concatenate(labels).astype(np.int32)
    tracks = tuple(f"x{t}" for t in range(k))
    return minimize(Dfa(tracks, (base,) * k, table, labels, 0))


def synthesize_addition(sys: NumerationSystem, max_states: int = 2_000_000) -> Dfa:
    """Three-track automaton for {(x, y, z) : x + y = z}."""
    a = synthesize_linear(sys, (1, 1, -1), 0, "=", max_states)
    return a.rename({"x0": "x", "x1": "y", "x2": "z"})


# -- standard systems and file format -------------------------------------------

def dt_h() -> NumerationSystem:
    from .words import H_ABC

    return dt_from_morphism(H_ABC, "a", name="dt_h")


def dt_q() -> NumerationSystem:
    from .words import G_ABC, G_PRIME, G_SECOND, H_ABC

    return inflate_for_image(dt_from_morphism(H_ABC, "a"), G_ABC, G_PRIME, G_SECOND, name="dt_q")


_SECTION = re.compile(r"^\[(\w+)\]$")


def parse_system(text: str, name: str = "custom") -> NumerationSystem:
    """Read a system file.

    ::

        [morphism]
        seed a
        a -> ab
        [g]
        a -> 011
        [gprime]
        a -> a12
        [gsecond]
        a -> 0

    The three image sections are optional but must appear together.
    """
    sections: dict[str, list[str]] = {}
    current = None
    seed = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = m.group(1)
            sections[current] = []
            continue
        if current is None:
            raise NumerationError(f"rule outside a section: {raw!r}")
        if current == "morphism" and line.startswith("seed "):
            seed = line.split()[1]
            continue
        sections[current].append(line)
    if "morphism" not in sections:
        raise NumerationError("missing [morphism] section")
    try:
        morph = Morphism.parse("\n".join(sections["morphism"]))
        base = dt_from_morphism(morph, seed, name=name)
        image = [k for k in ("g", "gprime", "gsecond") if k in sections]
        if not image:
            return base
        if len(image) != 3:
            raise NumerationError("[g], [gprime] and [gsecond] go together")
        g, gp, gs = (Morphism.parse("\n".join(sections[k])) for k in ("g", "gprime", "gsecond"))
    except WordError as exc:
        raise NumerationError(str(exc)) from exc
    return inflate_for_image(base, g, gp, gs, name=name)


DT_Q_TEXT = """\
[morphism]
seed a
a -> ab
b -> cb
c -> a
[g]
a -> 011
b -> 0
c -> 01
[gprime]
a -> a12
b -> b
c -> c3
[gsecond]
a -> 0
b -> 0
c -> 0
1 -> 1
2 -> 1
3 -> 1
"""


# -- brute-force verification --------------------------------------------------------

def padded_digits(sys: NumerationSystem, values, width: int | None = None) -> np.ndarray:
    """Matrix of left-padded canonical representations, one row per value."""
    reps = [sys.represent(int(v)) for v in values]
    width = max((len(r) for r in reps), default=0) if width is None else width
    out = np.zeros((len(reps), width), dtype=np.int64)
    for i, r in enumerate(reps):
        if len(r) > width:
            raise NumerationError(f"representation of {values[i]} is longer than {width}")
        if r:
            out[i, width - len(r):] = r
    return out


def addition_box_errors(sys: NumerationSystem, add: Dfa, bound: int, chunk: int = 200_000):
    """Pairs (x, y) with 0 <= x, y <= bound where ``add`` does not accept
    exactly one z, namely x + y.

    For each pair the automaton is run over every z digit string of the
    padded width, counting accepting paths; an exact adder has one path per
    pair and it spells x + y.
    """
    if add.tracks != ("x", "y", "z"):
        add = add.reorder(("x", "y", "z"))
    width = len(sys.represent(2 * bound)) + 1
    reps = padded_digits(sys, range(2 * bound + 1), width)
    st = strides(add.bases)
    zdig = np.arange(add.bases[2], dtype=np.int64)
    xs, ys = np.meshgrid(np.arange(bound + 1), np.arange(bound + 1), indexing="ij")
    xs, ys = xs.ravel(), ys.ravel()
    flat = add.table.reshape(-1).astype(np.int64)
    nsym = add.n_symbols
    n = add.n_states
    bad = []
    for lo in range(0, xs.size, chunk):
        x, y = xs[lo:lo + chunk], ys[lo:lo + chunk]
        base_sym = (reps[x] * st[0] + reps[y] * st[1]).T.copy()  # (width, pairs)
        # sum path: z = x + y
        state = np.full(x.size, add.initial, dtype=np.int64)
        zsum = reps[x + y].T * st[2]
        for k in range(width):
            alive = state >= 0
            state[alive] = flat[state[alive] * nsym + base_sym[k, alive] + zsum[k, alive]]
        ok = state >= 0
        ok[ok] = add.labels[state[ok]] != 0
        # number of accepting z strings
        zoff = zdig * st[2]
        pair = np.arange(x.size, dtype=np.int64)
        cur = np.full(x.size, add.initial, dtype=np.int64)
        mult = np.ones(x.size, dtype=np.int64)
        for k in range(width):
            row = cur * nsym + base_sym[k][pair]
            s = flat[(row[:, None] + zoff[None, :]).reshape(-1)]
            live = s >= 0
            p = np.repeat(pair, zdig.size)[live]
            key = p * n + s[live]
            uniq, inv = np.unique(key, return_inverse=True)
            mult = np.bincount(inv, weights=np.repeat(mult, zdig.size)[live]).astype(np.int64)
            pair, cur = uniq // n, uniq % n
        acc = add.labels[cur] != 0
        paths = np.bincount(pair[acc], weights=mult[acc], minlength=x.size).astype(np.int64)
        wrong = np.flatnonzero(~ok | (paths != 1))
        bad.extend((int(x[i]), int(y[i])) for i in wrong)
    return bad
