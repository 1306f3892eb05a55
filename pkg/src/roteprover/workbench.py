"""Ready-made numeration systems, compilers and bundled proof scripts."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .logic.compiler import Compiler
from .numeration import NumerationSystem, dt_h, dt_q

SYSTEMS = {"dt_h": dt_h, "dt_q": dt_q}
# sequence names bound in formulas, per system
SEQUENCES = {"dt_h": ("P",), "dt_q": ("Q", "Mor")}


@lru_cache(maxsize=None)
def system(name: str = "dt_q") -> NumerationSystem:
    try:
        return SYSTEMS[name]()
    except KeyError:
        raise KeyError(f"unknown system {name!r}; choose from {sorted(SYSTEMS)}") from None


def compiler(name: str = "dt_q") -> Compiler:
    """A fresh compiler over ``name`` with its sequence names bound."""
    sys = system(name)
    dfao = sys.dfao()
    return Compiler(sys, {s: dfao for s in SEQUENCES[name]})


def bundled_script(name: str = "q_checks") -> str:
    return resources.files("roteprover").joinpath("data", f"{name}.txt").read_text()
