"""Finite-word combinatorics and brute-force oracles.

Words are plain Python strings; every letter is a single character.  The
functions here are deliberately naive and independent of the automata
machinery so they can serve as witnesses against it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

FiniteWord = str


class WordError(ValueError):
    """Raised for domain errors on words and morphisms."""


class Inconclusive(Exception):
    """A prefix was too short to decide a property of the infinite word."""


@dataclass(frozen=True)
class Morphism:
    """A letter-to-word substitution.

    ``images`` maps each source letter to its image.  Erasing images are
    rejected unless ``erasing=True``.
    """

    images: Mapping[str, str]
    erasing: bool = False
    alphabet: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        images = dict(self.images)
        for letter, image in images.items():
            if len(letter) != 1:
                raise WordError(f"letters must be single characters: {letter!r}")
            if not image and not self.erasing:
                raise WordError(f"empty image for {letter!r} in a non-erasing morphism")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "alphabet", tuple(images))

    def __call__(self, word: str) -> str:
        return apply_morphism(self, word)

    def __getitem__(self, letter: str) -> str:
        return self.images[letter]

    @classmethod
    def parse(cls, text: str) -> "Morphism":
        """Read rules of the form ``0 -> 011``, one per line; ``#`` starts a comment."""
        images: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line:
                raise WordError(f"bad morphism rule: {raw!r}")
            lhs, rhs = (part.strip() for part in line.split("->", 1))
            if lhs in images:
                raise WordError(f"duplicate rule for {lhs!r}")
            images[lhs] = rhs
        erasing = any(not v for v in images.values())
        return cls(images, erasing=erasing)

    def format(self) -> str:
        return "".join(f"{a} -> {w}\n" for a, w in self.images.items())

    def incidence_matrix(self, order: Iterable[str] | None = None) -> list[list[int]]:
        """Entry (x, y) counts occurrences of y in the image of x."""
        letters = list(order) if order is not None else list(self.alphabet)
        return [[self.images[x].count(y) for y in letters] for x in letters]


def apply_morphism(m: Morphism, word: str) -> str:
    try:
        return "".join(m.images[c] for c in word)
    except KeyError as exc:
        raise WordError(f"letter {exc.args[0]!r} outside the source alphabet") from None


def fixed_point_prefix(m: Morphism, seed: str, length: int) -> str:
    """First ``length`` letters of the fixed point of ``m`` starting with ``seed``."""
    image = m.images.get(seed)
    if image is None or len(image) < 2 or image[0] != seed:
        raise WordError(f"morphism is not prolongable on {seed!r}")
    word = seed
    while len(word) < length:
        word = apply_morphism(m, word)
    return word[:length]


# The morphisms generating p and q, written over {0,1,2}.
H = Morphism({"0": "01", "1": "21", "2": "0"})
G = Morphism({"0": "011", "1": "0", "2": "01"})
# Same morphisms over {a,b,c}, with the inflation used for the numeration of q.
H_ABC = Morphism({"a": "ab", "b": "cb", "c": "a"})
G_ABC = Morphism({"a": "011", "b": "0", "c": "01"})
G_PRIME = Morphism({"a": "a12", "b": "b", "c": "c3"})
G_SECOND = Morphism({"a": "0", "b": "0", "c": "0", "1": "1", "2": "1", "3": "1"})


def p_prefix(length: int) -> str:
    return fixed_point_prefix(H, "0", length)


@lru_cache(maxsize=8)
def q_prefix(length: int) -> str:
    """First ``length`` letters of q = g(p)."""
    if length <= 0:
        return ""
    # every letter of p has a nonempty g-image, so `length` letters of p suffice
    return apply_morphism(G, p_prefix(length))[:length]


def q_prefix_inflated(length: int) -> str:
    """First ``length`` letters of q built as g''(g'(p)) over {a,b,c}."""
    if length <= 0:
        return ""
    p = fixed_point_prefix(H_ABC, "a", length)
    return apply_morphism(G_SECOND, apply_morphism(G_PRIME, p))[:length]


def reverse(w: str) -> str:
    return w[::-1]


def complement(w: str) -> str:
    if set(w) - {"0", "1"}:
        raise WordError("complement is defined on binary words only")
    return w.translate(str.maketrans("01", "10"))


def least_period(w: str) -> int:
    """Smallest p >= 1 with w[i] == w[i+p] for all valid i (via the KMP border)."""
    n = len(w)
    if n == 0:
        raise WordError("the empty word has no period")
    border = [0] * n
    k = 0
    for i in range(1, n):
        while k and w[i] != w[k]:
            k = border[k - 1]
        if w[i] == w[k]:
            k += 1
        border[i] = k
    return n - border[-1]


def exponent_stats(w: str) -> tuple[int, Fraction]:
    p = least_period(w)
    return p, Fraction(len(w), p)


def has_period(w: str, p: int) -> bool:
    return w[: len(w) - p] == w[p:]


def _symbol_codes(w: str) -> np.ndarray:
    return np.frombuffer(w.encode("latin-1"), dtype=np.uint8)


def critical_exponent(w: str) -> Fraction:
    """Maximum exponent over all nonempty factors of ``w``.

    For every shift p, a maximal run of k positions with w[i] == w[i+p]
    yields a factor of length k + p and period p.
    """
    if not w:
        raise WordError("critical exponent of the empty word")
    best = Fraction(1)
    codes = _symbol_codes(w)
    n = len(codes)
    for p in range(1, n):
        run = _longest_true_run(codes[:-p] == codes[p:])
        if run and Fraction(run + p, p) > best:
            best = Fraction(run + p, p)
    return best


def _longest_true_run(mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    padded = np.concatenate(([0], mask.view(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    return int((edges[1::2] - edges[::2]).max())


def powers_above(w: str, threshold: Fraction, strict: bool = True) -> list[tuple[int, int, int]]:
    """All maximal repetitions (start, length, period) whose exponent exceeds
    ``threshold`` (or reaches it when ``strict`` is False)."""
    codes = _symbol_codes(w)
    n = len(codes)
    threshold = Fraction(threshold)
    num, den = threshold.numerator, threshold.denominator
    found = []
    for p in range(1, n):
        mask = (codes[:-p] == codes[p:]).view(np.int8)
        if not mask.any():
            continue
        padded = np.concatenate(([0], mask, [0]))
        edges = np.flatnonzero(np.diff(padded))
        starts, lengths = edges[::2], edges[1::2] - edges[::2] + p
        # exponent lengths/p against num/den, compared by cross-multiplication
        lhs, rhs = lengths * den, num * p
        keep = lhs > rhs if strict else lhs >= rhs
        found.extend((int(a), int(b), p) for a, b in zip(starts[keep], lengths[keep]))
    return found


def factor_set(prefix: str, n: int) -> set[str]:
    if n < 0 or n > len(prefix):
        raise WordError(f"factor length {n} outside [0, {len(prefix)}]")
    return {prefix[i : i + n] for i in range(len(prefix) - n + 1)}


def factor_complexity(prefix: str, n: int) -> int:
    return len(factor_set(prefix, n))


def is_rote(w: str) -> bool:
    """True iff w has at most 2i distinct factors of each length i >= 1."""
    if set(w) - {"0", "1"}:
        raise WordError("Rote words are binary")
    return all(factor_complexity(w, i) <= 2 * i for i in range(1, len(w) + 1))


def zero_count_range(prefix: str, n: int) -> tuple[int, int]:
    """Min and max number of 0s over the length-n factors of a binary prefix."""
    if n < 0 or n > len(prefix):
        raise WordError(f"factor length {n} outside [0, {len(prefix)}]")
    zeros = np.concatenate(([0], np.cumsum(_symbol_codes(prefix) == ord("0"))))
    counts = zeros[n:] - zeros[: len(zeros) - n]
    return int(counts.min()), int(counts.max())


def abelian_complexity(prefix: str, n: int) -> int:
    # sliding a window by one changes the 0-count by at most one, so the
    # attained counts form an interval
    lo, hi = zero_count_range(prefix, n)
    return hi - lo + 1


def reversible_factors(prefix: str, n: int) -> set[str]:
    factors = factor_set(prefix, n)
    return {f for f in factors if f[::-1] in factors}


def occurrences(prefix: str, n: int) -> dict[str, list[int]]:
    if n < 1 or n > len(prefix):
        raise WordError(f"factor length {n} outside [1, {len(prefix)}]")
    where: dict[str, list[int]] = {}
    for i in range(len(prefix) - n + 1):
        where.setdefault(prefix[i : i + n], []).append(i)
    return where


def max_recurrence_gap(prefix: str, n: int, factor: str | None = None) -> int:
    """Largest distance between consecutive starts of equal length-n factors.

    With ``factor`` given, only that factor's occurrences are measured.
    Raises :class:`Inconclusive` if a measured factor occurs only once.
    """
    where = occurrences(prefix, n)
    if factor is not None:
        if len(factor) != n:
            raise WordError("factor length does not match n")
        where = {factor: where.get(factor, [])}
    best = 0
    for f, starts in where.items():
        if len(starts) < 2:
            raise Inconclusive(f"factor {f} occurs at most once in a prefix of length {len(prefix)}")
        best = max(best, max(b - a for a, b in zip(starts, starts[1:])))
    return best


@dataclass
class FactorStats:
    """Per-length factor counts and 0-count sets of a prefix."""

    prefix_length: int
    counts: dict[int, int]
    zero_counts: dict[int, frozenset[int]]

    @classmethod
    def of(cls, prefix: str, lengths: Iterable[int]) -> "FactorStats":
        counts, zeros = {}, {}
        for n in lengths:
            counts[n] = factor_complexity(prefix, n)
            lo, hi = zero_count_range(prefix, n)
            zeros[n] = frozenset(range(lo, hi + 1))
        return cls(len(prefix), counts, zeros)


def saturated(fn, length: int, *args):
    """Evaluate ``fn(q_prefix(L), *args)`` at L and 2L; the property of the
    infinite word is accepted only when both agree."""
    small = fn(q_prefix(length), *args)
    large = fn(q_prefix(2 * length), *args)
    return small, large
