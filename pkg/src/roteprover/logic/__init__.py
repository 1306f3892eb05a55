from .ast import free_vars
from .compiler import CompileError, Compiler, Predicate, PredicateStore
from .parser import FormulaSyntaxError, parse, system_selector

__all__ = [
    "CompileError",
    "Compiler",
    "FormulaSyntaxError",
    "Predicate",
    "PredicateStore",
    "free_vars",
    "parse",
    "system_selector",
]
