"""Proof scripts: a line-oriented command language over the compiler.

::

    # comment
    def factoreq "Au,v (u>=i & u<i+n & u+j=v+i) => Q[u]=Q[v]":
    def novel n "n>=1 & Aj (j<i) => ~$factoreq(i,j,n)":
    def twon count i "n>=1 & i<2*n"
    eval uc "Ag,n (n>=1 & $maxgap(g,n)) => g<=7*n"
    linrep-eq novel twon

``def name "f"`` stores a predicate whose arguments are the free variables
in alphabetical order.  Identifiers between the name and the formula are
parameters: the one remaining free variable is counted and a linear
representation is stored as well.  ``count v`` names the counted variable
directly.  Quoted formulas may span lines; a trailing ``:`` or ``::`` and a
leading ``?msd_...`` selector are accepted and ignored.
"""
from __future__ import annotations

import shlex
import time
from dataclasses import dataclass, field

from .ast import free_vars
from .compiler import CompileError, Compiler
from .linrep import DivergentCount, LinearRepresentation, count_representation, linrep_equal
from .parser import FormulaSyntaxError, parse


class ScriptError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class CommandResult:
    line: int
    command: str
    name: str
    value: object = None
    states: int | None = None
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def describe(self) -> str:
        if self.command == "def":
            text = f"{self.name}: {self.states} states"
            if "counted" in self.extra:
                text += f", counts {self.extra['counted']} (dimension {self.extra['dimension']})"
            elif "count_error" in self.extra:
                text += f", count diverges: {self.extra['count_error']}"
        elif self.command == "eval":
            text = f"{self.name}: {'TRUE' if self.value else 'FALSE'}"
        else:
            text = f"{self.name}: {'identical' if self.value else 'different'}"
        return f"{text} [{self.seconds:.2f}s]"


def statements(text: str):
    """Yield (line number, tokens) for each command, honouring quotes and comments."""
    buf: list[str] = []
    start = 1
    line = 1
    quoted = comment = False
    for ch in text + "\n":
        if comment and ch != "\n":
            continue
        comment = False
        if ch == "#" and not quoted:
            comment = True
            continue
        if ch == '"':
            quoted = not quoted
        if ch == "\n" and not quoted:
            stmt = "".join(buf).strip()
            buf = []
            if stmt:
                try:
                    tokens = shlex.split(stmt.rstrip(":").rstrip())
                except ValueError as exc:
                    raise ScriptError(str(exc), start) from exc
                if tokens:
                    yield start, tokens
            line += 1
            start = line
            continue
        if ch == "\n":
            line += 1
        buf.append(ch)
    if quoted:
        raise ScriptError("unterminated quoted formula", start)


class ScriptRunner:
    """Executes commands against one compiler and remembers counting results."""

    def __init__(self, compiler: Compiler):
        self.compiler = compiler
        self.representations: dict[str, LinearRepresentation] = {}

    def run(self, text: str, echo=None) -> list[CommandResult]:
        results = []
        for line, tokens in statements(text):
            res = self.execute(tokens, line)
            results.append(res)
            if echo is not None:
                echo(res)
        return results

    def execute(self, tokens: list[str], line: int = 0) -> CommandResult:
        cmd, args = tokens[0], tokens[1:]
        t0 = time.perf_counter()
        try:
            if cmd == "def":
                res = self._define(args, line)
            elif cmd == "eval":
                if len(args) != 2:
                    raise ScriptError('usage: eval <name> "<formula>"', line)
                value = self.compiler.eval_closed(args[1])
                res = CommandResult(line, "eval", args[0], value)
            elif cmd == "linrep-eq":
                if len(args) != 2:
                    raise ScriptError("usage: linrep-eq <name1> <name2>", line)
                missing = [a for a in args if a not in self.representations]
                if missing:
                    raise ScriptError(f"no linear representation for {', '.join(missing)}", line)
                value = linrep_equal(*(self.representations[a] for a in args))
                res = CommandResult(line, "linrep-eq", f"{args[0]} = {args[1]}", value)
            else:
                raise ScriptError(f"unknown command {cmd!r}", line)
        except (CompileError, FormulaSyntaxError) as exc:
            raise ScriptError(str(exc), line) from exc
        res.seconds = time.perf_counter() - t0
        return res

    def _define(self, args: list[str], line: int) -> CommandResult:
        if len(args) < 2:
            raise ScriptError('usage: def <name> [params | count <var>] "<formula>"', line)
        name, formula, middle = args[0], args[-1], args[1:-1]
        f = parse(formula)
        fv = free_vars(f)
        counted, params = None, ()
        if middle and middle[0] == "count":
            if len(middle) != 2:
                raise ScriptError("count takes exactly one variable", line)
            counted = middle[1]
            params = tuple(sorted(fv - {counted}))
        elif middle:
            params = tuple(middle)
            rest = fv - set(params)
            if len(rest) != 1:
                raise ScriptError(f"expected one counted variable besides {params}, found {sorted(rest)}", line)
            counted = rest.pop()
        if counted is not None and (counted not in fv or not set(params) <= fv):
            raise ScriptError(f"variables {params} / {counted!r} do not match the formula", line)
        pred = self.compiler.define(name, f)
        res = CommandResult(line, "def", name, states=pred.automaton.n_states)
        if counted is None:
            return res
        try:
            lr = count_representation(pred.automaton, counted, params, self.compiler.system)
        except DivergentCount as exc:
            res.extra["count_error"] = str(exc)
            return res
        self.representations[name] = lr
        res.extra.update(counted=counted, params=params, dimension=lr.dimension)
        return res
