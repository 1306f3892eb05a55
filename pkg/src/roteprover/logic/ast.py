"""Formula syntax tree."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left}+{self.right})"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left}-{self.right})"


@dataclass(frozen=True)
class Mul:
    factor: int
    term: "Term"

    def __str__(self):
        return f"{self.factor}*{self.term}"


Term = Union[Var, Const, Add, Sub, Mul]


@dataclass(frozen=True)
class SeqIndex:
    seq: str
    index: Term

    def __str__(self):
        return f"{self.seq}[{self.index}]"


@dataclass(frozen=True)
class Letter:
    """A sequence output symbol on the right of ``Q[t]=...``."""

    value: int

    def __str__(self):
        return f"@{self.value}"


@dataclass(frozen=True)
class Cmp:
    op: str
    left: Union[Term, SeqIndex]
    right: Union[Term, SeqIndex, Letter]

    def __str__(self):
        return f"{self.left}{self.op}{self.right}"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def __str__(self):
        return f"${self.name}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Bool:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return f"~{self.body}"


@dataclass(frozen=True)
class BinOp:
    op: str  # '&', '|', '=>', '<=>'
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Quant:
    kind: str  # 'A' or 'E'
    names: tuple
    body: "Formula"

    def __str__(self):
        return f"{self.kind}{','.join(self.names)} ({self.body})"


Formula = Union[Cmp, Call, Bool, Not, BinOp, Quant]


def term_vars(t) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Add, Sub)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Mul):
        return term_vars(t.term)
    if isinstance(t, SeqIndex):
        return term_vars(t.index)
    return set()


def has_sub(t) -> bool:
    if isinstance(t, Sub):
        return True
    if isinstance(t, Add):
        return has_sub(t.left) or has_sub(t.right)
    if isinstance(t, Mul):
        return has_sub(t.term)
    if isinstance(t, SeqIndex):
        return has_sub(t.index)
    return False


def free_vars(f) -> set[str]:
    if isinstance(f, Cmp):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Call):
        out = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Bool):
        return set()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BinOp):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quant):
        return free_vars(f.body) - set(f.names)
    raise TypeError(f"not a formula: {f!r}")
