from .core import (
    DEAD,
    AutomatonError,
    Dfa,
    Dfao,
    Nfa,
    combine,
    complement,
    determinize_minimize,
    empty,
    encode,
    full,
    lift,
    minimize,
    pad_columns,
    product,
    project,
    symbol_digits,
    truth,
    valid,
)
from .textio import dump, dumps, load, loads

__all__ = [
    "DEAD",
    "AutomatonError",
    "Dfa",
    "Dfao",
    "Nfa",
    "combine",
    "complement",
    "determinize_minimize",
    "dump",
    "dumps",
    "empty",
    "encode",
    "full",
    "lift",
    "load",
    "loads",
    "minimize",
    "pad_columns",
    "product",
    "project",
    "symbol_digits",
    "truth",
    "valid",
]
