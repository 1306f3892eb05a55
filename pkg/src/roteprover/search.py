"""Exhaustive search for binary Rote words avoiding an exponent bound.

A word survives when it has at most 2i distinct factors of each length i and
no factor whose exponent reaches the threshold (strict mode) or exceeds it
(non-strict mode).  The tree is walked by the compiled kernel when it is
available; maximal words are then re-checked with the naive oracles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import kernels
from .words import complement, critical_exponent, is_rote, reverse


class SearchError(RuntimeError):
    """The search ran out of budget or disagreed with the oracles."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SearchConfig:
    threshold: Fraction = Fraction(5, 2)
    strict: bool = True
    max_length: int | None = None
    first_letter_fixed: bool = False
    max_nodes: int = 0  # 0 means unlimited

    def __post_init__(self):
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        if self.threshold <= 1:
            raise ValueError("threshold must exceed 1")
        if self.max_length is not None and self.max_length < 1:
            raise ValueError("max_length must be positive")

    def admits(self, w: str) -> bool:
        """Oracle form of the pruning predicate."""
        if not w:
            return True
        if not is_rote(w):
            return False
        e = critical_exponent(w)
        return e < self.threshold if self.strict else e <= self.threshold


@dataclass
class SearchResult:
    max_depth: int
    maximal_words: frozenset[str]
    level_counts: list[int]  # index = word length; entry 0 is the empty word
    truncated: bool
    nodes: int = field(default=0)

    def longest(self) -> set[str]:
        return {w for w in self.maximal_words if len(w) == self.max_depth}


def _run(cfg: SearchConfig, cap: int, want_words: bool):
    t = cfg.threshold
    counts, words, depth, truncated, exhausted = kernels.search(
        t.numerator, t.denominator, cfg.strict, cap, cfg.first_letter_fixed, want_words, cfg.max_nodes)
    counts = list(counts)
    counts[0] = 1
    return counts, words, depth, truncated, exhausted


def grow_tree(cfg: SearchConfig, validate: bool = True) -> SearchResult:
    """Walk the whole tree (or up to ``cfg.max_length``).

    Without a cap the length bound is doubled until the tree is exhausted,
    so an infinite language needs either a cap or a node budget.
    """
    cap = cfg.max_length or 64
    while True:
        counts, words, depth, truncated, exhausted = _run(cfg, cap, True)
        if exhausted:
            raise SearchError(f"node budget {cfg.max_nodes} exhausted", partial=counts)
        if not truncated or cfg.max_length is not None:
            break
        cap *= 2
    while len(counts) > 1 and counts[-1] == 0 and len(counts) - 1 > depth:
        counts.pop()
    result = SearchResult(depth, frozenset(words), counts, truncated, sum(counts) - 1)
    if validate:
        validate_maximal(cfg, result.maximal_words)
    return result


def validate_maximal(cfg: SearchConfig, words: Iterable[str]) -> None:
    """Check with the naive oracles that each word is admitted and that
    neither one-letter extension is."""
    for w in words:
        if not cfg.admits(w):
            raise SearchError(f"oracle rejects reported word {w}")
        for c in "01":
            if cfg.admits(w + c):
                raise SearchError(f"reported maximal word {w} extends by {c}")


def symmetry_closure(words: Iterable[str]) -> set[str]:
    """Close a set of binary words under reversal and exchanging 0 and 1."""
    out = set()
    for w in words:
        for v in (w, reverse(w)):
            out.add(v)
            out.add(complement(v))
    return out


def level_counts(cfg: SearchConfig, n_max: int) -> list[int]:
    """Number of admitted words of each length 0..n_max (entry 0 is 1)."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    counts, _, _, _, exhausted = _run(cfg, n_max, False)
    if exhausted:
        raise SearchError(f"node budget {cfg.max_nodes} exhausted below length {n_max}", partial=counts)
    return counts[: n_max + 1]
