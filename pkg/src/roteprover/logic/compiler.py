"""Compile formulas into automata over padded representations.

Every compiled automaton accepts exactly the tuples of valid padded
representations (one track per free variable) that satisfy the formula.

Negations are pushed towards the atoms.  Comparisons between terms become
a single linear constraint automaton; a subtraction ``a - b`` adds the guard
``a >= b`` so that a difference that would go negative makes the atom false.
Conjunctions, including the bodies of existential quantifiers, are gathered
into one pool of automata that is multiplied out greedily, projecting each
bound variable as soon as no remaining automaton mentions it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

import numpy as np

from ..automata import Dfa, Dfao, combine, complement, empty, minimize, project, truth, valid
from ..numeration import NumerationSystem, synthesize_linear
from .ast import (
    Add,
    BinOp,
    Bool,
    Call,
    Cmp,
    Const,
    Letter,
    Mul,
    Not,
    Quant,
    SeqIndex,
    Sub,
    Var,
    free_vars,
    has_sub,
)
from .parser import parse


class CompileError(ValueError):
    """Unbound names, arity mismatches and misuse."""


_FLIP = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", "<=": ">", ">": "<="}


@dataclass
class Predicate:
    name: str
    params: tuple[str, ...]
    automaton: Dfa

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class PredicateStore:
    predicates: dict[str, Predicate] = field(default_factory=dict)

    def __contains__(self, name):
        return name in self.predicates

    def __getitem__(self, name) -> Predicate:
        try:
            return self.predicates[name]
        except KeyError:
            raise CompileError(f"unknown predicate ${name}") from None

    def __iter__(self):
        return iter(self.predicates.values())

    def add(self, pred: Predicate):
        if pred.name in self.predicates:
            raise CompileError(f"predicate {pred.name!r} is already defined")
        self.predicates[pred.name] = pred


# -- syntax helpers -------------------------------------------------------------

def linear_form(t) -> tuple[dict[str, int], int]:
    """Coefficients and constant of a term read over the integers."""
    if isinstance(t, Var):
        return {t.name: 1}, 0
    if isinstance(t, Const):
        return {}, t.value
    if isinstance(t, (Add, Sub)):
        lc, l0 = linear_form(t.left)
        rc, r0 = linear_form(t.right)
        sign = 1 if isinstance(t, Add) else -1
        out = dict(lc)
        for v, c in rc.items():
            out[v] = out.get(v, 0) + sign * c
        return out, l0 + sign * r0
    if isinstance(t, Mul):
        c, c0 = linear_form(t.term)
        return {v: t.factor * k for v, k in c.items()}, t.factor * c0
    raise CompileError(f"not a term: {t!r}")


def subtractions(t) -> list[Sub]:
    if isinstance(t, Sub):
        return subtractions(t.left) + subtractions(t.right) + [t]
    if isinstance(t, Add):
        return subtractions(t.left) + subtractions(t.right)
    if isinstance(t, Mul):
        return subtractions(t.term)
    return []


def _sub_term(t, mapping):
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, (Add, Sub)):
        return type(t)(_sub_term(t.left, mapping), _sub_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(t.factor, _sub_term(t.term, mapping))
    if isinstance(t, SeqIndex):
        return SeqIndex(t.seq, _sub_term(t.index, mapping))
    return t


def substitute(f, mapping: dict[str, str]):
    """Rename free variables, leaving rebound occurrences alone."""
    if not mapping:
        return f
    if isinstance(f, Cmp):
        return Cmp(f.op, _sub_term(f.left, mapping), _sub_term(f.right, mapping))
    if isinstance(f, Call):
        return Call(f.name, tuple(_sub_term(a, mapping) for a in f.args))
    if isinstance(f, Bool):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BinOp):
        return BinOp(f.op, substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Quant):
        inner = {k: v for k, v in mapping.items() if k not in f.names}
        return Quant(f.kind, f.names, substitute(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


def _index_has_sub(f) -> bool:
    if isinstance(f, Cmp):
        return has_sub(f.left) or has_sub(f.right)
    if isinstance(f, Call):
        return any(has_sub(a) for a in f.args)
    return False


class Compiler:
    """Formula compiler bound to one numeration system and its sequences."""

    def __init__(self, system: NumerationSystem, sequences: dict[str, Dfao] | None = None,
                 store: PredicateStore | None = None):
        self.system = system
        self.sequences = dict(sequences or {})
        self.store = store if store is not None else PredicateStore()
        self.addressing = system.addressing
        self.base = system.base
        self._fresh = count(1)
        self._cache: dict = {}
        self._linear: dict = {}
        self._atoms: dict = {}
        self._neg_pred: dict[str, Dfa] = {}

    def fresh(self) -> str:
        return f"#{next(self._fresh)}"

    def valid(self, tracks) -> Dfa:
        return valid(tuple(tracks), self.addressing)

    def complement(self, a: Dfa) -> Dfa:
        return complement(a, self.addressing)

    def _addr(self, tracks):
        name = self.addressing.tracks[0]
        return [self.addressing.rename({name: t}) for t in tracks]

    # -- primitive automata ------------------------------------------------------
    def linear(self, coefficients: dict[str, int], constant: int, op: str) -> Dfa:
        """Automaton for ``sum(c * v) op constant`` over the listed variables
        (a zero coefficient keeps its variable as an unconstrained track)."""
        names = sorted(coefficients)
        coeffs = [coefficients[v] for v in names]
        if op == ">=":
            coeffs, constant, op = [-c for c in coeffs], -constant, "<="
        elif op == ">":
            coeffs, constant, op = [-c for c in coeffs], -constant - 1, "<="
        elif op == "<":
            constant, op = constant - 1, "<="
        if not names:
            return truth({"=": 0 == constant, "!=": 0 != constant, "<=": 0 <= constant}[op])
        key = (tuple(coeffs), constant, op)
        a = self._linear.get(key)
        if a is None:
            a = synthesize_linear(self.system, coeffs, constant, op)
            self._linear[key] = a
        return a.rename({f"x{i}": v for i, v in enumerate(names)})

    def relation(self, op: str, left, right) -> Dfa:
        """``left op right`` for two terms read over the integers (no guards)."""
        lc, l0 = linear_form(left)
        rc, r0 = linear_form(right)
        coeffs = dict(lc)
        for v, c in rc.items():
            coeffs[v] = coeffs.get(v, 0) - c
        return self.linear(coeffs, r0 - l0, op)

    def guards(self, *terms) -> list[Dfa]:
        """``a >= b`` for every subtraction ``a - b`` inside the terms."""
        out = []
        for t in terms:
            for s in subtractions(t):
                out.append(self.relation(">=", s.left, s.right))
        return out

    def constant(self, c: int, x: str) -> Dfa:
        return self.linear({x: 1}, c, "=")

    def addition(self, x: str, y: str, z: str) -> Dfa:
        """x + y = z."""
        return self.relation("=", Add(Var(x), Var(y)), Var(z))

    def bind(self, term, fresh: set[str], parts: list[Dfa]) -> str:
        """Name for the value of ``term``; non-variables get a fresh variable."""
        if isinstance(term, Var):
            return term.name
        v = self.fresh()
        fresh.add(v)
        parts.append(self.relation("=", Var(v), term))
        parts.extend(self.guards(term))
        return v

    # -- products ------------------------------------------------------------------
    def conj(self, a: Dfa, b: Dfa) -> Dfa:
        return minimize(combine([a, b], lambda x, y: x & y))

    def disj(self, a: Dfa, b: Dfa) -> Dfa:
        tracks = list(a.tracks) + [t for t in b.tracks if t not in a.tracks]
        loose = [t for t in tracks if (t in a.tracks) != (t in b.tracks)]
        parts = [a, b, *self._addr(loose)]
        return minimize(combine(parts, lambda x, y, *v: (x | y) & np.logical_and.reduce([np.ones_like(x), *v]),
                                tracks=tracks))

    def conjoin(self, parts: list[Dfa], fresh: set[str]) -> Dfa:
        """Conjunction of ``parts`` with the variables in ``fresh`` projected
        out, each as soon as no remaining part mentions it."""
        parts = list(parts)
        current: Dfa | None = None
        while parts:
            cur_tracks = set(current.tracks) if current is not None else set()
            cur_size = current.n_states if current is not None else 1

            def score(i):
                p = parts[i]
                tracks = set(p.tracks) | cur_tracks
                rest = [q for j, q in enumerate(parts) if j != i]
                kept = {v for v in tracks if v not in fresh or any(v in q.tracks for q in rest)}
                return len(kept), len(tracks), cur_size * p.n_states

            part = parts.pop(min(range(len(parts)), key=score))
            current = part if current is None else self.conj(current, part)
            if current.is_empty():
                names = {t for q in [current, *parts] for t in q.tracks} - fresh
                return empty(tuple(sorted(names)), (self.base,) * len(names))
            for v in [t for t in current.tracks if t in fresh]:
                if all(v not in q.tracks for q in parts):
                    current = project(current, v)
        return current if current is not None else truth(True)

    # -- formulas ----------------------------------------------------------------------
    def compile(self, f, negate: bool = False) -> Dfa:
        if isinstance(f, str):
            f = parse(f)
        key = (f, negate)
        got = self._cache.get(key)
        if got is None:
            got = self._compile(f, negate)
            self._cache[key] = got
        return got

    def _compile(self, f, negate: bool) -> Dfa:
        if isinstance(f, Bool):
            return truth(f.value != negate)
        if isinstance(f, Not):
            return self.compile(f.body, not negate)
        if isinstance(f, BinOp):
            kind = self._shape(f, negate)
            if kind == "and":
                return self.conjoin(*self.gather(f, negate))
            if kind == "or":
                left, right = self._operands(f, negate)
                return self.disj(self.compile(*left), self.compile(*right))
            a, b = f.left, f.right
            if negate:
                return self.disj(self.conj(self.compile(a), self.compile(b, True)),
                                 self.conj(self.compile(a, True), self.compile(b)))
            return self.disj(self.conj(self.compile(a), self.compile(b)),
                             self.conj(self.compile(a, True), self.compile(b, True)))
        if isinstance(f, Quant):
            if (f.kind == "E") != negate:
                return self.conjoin(*self.gather(f, negate))
            # a universal is the complement of the dual existential
            return self.complement(self.compile(f, not negate))
        if isinstance(f, (Cmp, Call)):
            if negate and _index_has_sub(f):
                return self.complement(self.compile(f, False))
            return self.conjoin(*self.gather(f, negate))
        raise CompileError(f"cannot compile {f!r}")

    @staticmethod
    def _shape(f: BinOp, negate: bool) -> str:
        if f.op == "<=>":
            return "iff"
        if f.op == "=>":
            return "and" if negate else "or"
        return "and" if (f.op == "&") != negate else "or"

    @staticmethod
    def _operands(f: BinOp, negate: bool):
        """Operands with their polarities for a conjunctive or disjunctive node."""
        if f.op == "=>":
            return (f.left, not negate), (f.right, negate)
        return (f.left, negate), (f.right, negate)

    def gather(self, f, negate: bool) -> tuple[list[Dfa], set[str]]:
        """Automata whose conjunction, with ``fresh`` projected, is ``f``."""
        if isinstance(f, Not):
            return self.gather(f.body, not negate)
        if isinstance(f, BinOp) and self._shape(f, negate) == "and":
            (l, ln), (r, rn) = self._operands(f, negate)
            lp, lf = self.gather(l, ln)
            rp, rf = self.gather(r, rn)
            return lp + rp, lf | rf
        if isinstance(f, Quant) and (f.kind == "E") != negate:
            renamed = {v: self.fresh() for v in f.names}
            parts, fresh = self.gather(substitute(f.body, renamed), negate)
            return parts, fresh | set(renamed.values())
        if isinstance(f, Cmp) and not (negate and _index_has_sub(f)):
            if isinstance(f.left, SeqIndex):
                return self._seq_parts(f, negate)
            op = _FLIP[f.op] if negate else f.op
            return [self.relation(op, f.left, f.right), *self.guards(f.left, f.right)], set()
        if isinstance(f, Call) and not (negate and _index_has_sub(f)):
            return self._call_parts(f, negate)
        return [self.compile(f, negate)], set()

    def _sequence(self, name: str) -> Dfao:
        try:
            return self.sequences[name]
        except KeyError:
            raise CompileError(f"unbound sequence {name!r}") from None

    def _seq_atom(self, key, build) -> Dfa:
        a = self._atoms.get(key)
        if a is None:
            a = build()
            self._atoms[key] = a
        return a

    def _seq_parts(self, f: Cmp, negate: bool):
        op = _FLIP[f.op] if negate else f.op
        fresh: set[str] = set()
        parts: list[Dfa] = []
        lname = f.left.seq
        lseq = self._sequence(lname)
        lv = self.bind(f.left.index, fresh, parts)
        if isinstance(f.right, Letter):
            c = f.right.value

            def build():
                test = (lambda l: l == c) if op == "=" else (lambda l: (l >= 0) & (l != c))
                return minimize(combine([lseq.rename({lseq.tracks[0]: "x"})], test, on_labels=True))

            parts.insert(0, self._seq_atom((lname, op, c), build).rename({"x": lv}))
            return parts, fresh
        rname = f.right.seq
        rseq = self._sequence(rname)
        rv = self.bind(f.right.index, fresh, parts)
        if op == "=":
            def fn(a, b):
                return (a >= 0) & (a == b)
        else:
            def fn(a, b):
                return (a >= 0) & (b >= 0) & (a != b)
        same = lv == rv
        right_track = "x" if same else "y"

        def build():
            return minimize(combine([lseq.rename({lseq.tracks[0]: "x"}), rseq.rename({rseq.tracks[0]: right_track})],
                                    fn, on_labels=True))

        atom = self._seq_atom((lname, rname, op, same), build)
        parts.insert(0, atom.rename({"x": lv} if same else {"x": lv, "y": rv}))
        return parts, fresh

    def _call_parts(self, f: Call, negate: bool):
        pred = self.store[f.name]
        if len(f.args) != pred.arity:
            raise CompileError(f"${f.name} takes {pred.arity} arguments, got {len(f.args)}")
        base = self._negated_predicate(pred) if negate else pred.automaton
        fresh: set[str] = set()
        parts: list[Dfa] = []
        mapping = {}
        used: set[str] = set()
        for param, arg in zip(pred.params, f.args):
            if isinstance(arg, Var) and arg.name not in used:
                mapping[param] = arg.name
                used.add(arg.name)
            else:
                v = self.fresh()
                fresh.add(v)
                mapping[param] = v
                parts.append(self.relation("=", Var(v), arg))
                parts.extend(self.guards(arg))
        # rename through temporaries so that swapped names cannot collide
        tmp = {p: f"%{i}" for i, p in enumerate(base.tracks)}
        renamed = base.rename(tmp).rename({tmp[p]: mapping[p] for p in base.tracks})
        parts.insert(0, renamed)
        return parts, fresh

    def _negated_predicate(self, pred: Predicate) -> Dfa:
        got = self._neg_pred.get(pred.name)
        if got is None:
            got = self.complement(pred.automaton)
            self._neg_pred[pred.name] = got
        return got

    # -- public conveniences -------------------------------------------------------
    def lift(self, a: Dfa, tracks) -> Dfa:
        """Extend ``a`` to ``tracks``; new tracks range over valid values."""
        tracks = tuple(tracks)
        extra = set(a.tracks) - set(tracks)
        if extra:
            raise CompileError(f"free variables {sorted(extra)} missing from {tracks}")
        missing = [t for t in tracks if t not in a.tracks]
        if missing:
            a = minimize(combine([a, *self._addr(missing)], lambda x, *v: np.logical_and.reduce([x, *v]),
                                 tracks=tracks))
        return minimize(a.reorder(tracks))

    def automaton(self, formula, tracks=None) -> Dfa:
        f = parse(formula) if isinstance(formula, str) else formula
        if tracks is None:
            tracks = tuple(sorted(free_vars(f)))
        return self.lift(self.compile(f), tracks)

    def define(self, name: str, formula, params=None) -> Predicate:
        if name in self.store:
            raise CompileError(f"predicate {name!r} is already defined")
        f = parse(formula) if isinstance(formula, str) else formula
        fv = free_vars(f)
        params = tuple(params) if params is not None else tuple(sorted(fv))
        if not fv <= set(params):
            raise CompileError(f"parameters {params} do not cover free variables {sorted(fv)}")
        pred = Predicate(name, params, self.automaton(f, params))
        self.store.add(pred)
        return pred

    def eval_closed(self, formula) -> bool:
        f = parse(formula) if isinstance(formula, str) else formula
        fv = free_vars(f)
        if fv:
            raise CompileError(f"formula has free variables {sorted(fv)}")
        return not self.compile(f).is_empty()

    def holds(self, formula, **values: int) -> bool:
        """Membership of one assignment of natural numbers."""
        f = parse(formula) if isinstance(formula, str) else formula
        names = tuple(sorted(free_vars(f)))
        a = self.automaton(f, names)
        return a.accepts_words(*[self.system.represent(values[n]) for n in names])
