"""Recursive-descent parser for first-order formulas over a numeration system.

Surface syntax follows the usual automatic-sequence prover conventions so
that scripts paste in unchanged::

    ~Ei,n n>=1 & At,u (t>=i & 2*t<=2*i+3*n & u=t+n) => Q[t]=Q[u]

Precedence, tightest first: ``~``, ``&``, ``|``, ``=>``, ``<=>``.  A
quantifier's body extends as far right as possible.
"""
from __future__ import annotations

import re

from .ast import Add, BinOp, Bool, Call, Cmp, Const, Letter, Mul, Not, Quant, SeqIndex, Sub, Var


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}" + (f": {text[:pos]}<!>{text[pos:]}" if text else ""))
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op><=>|=>|<=|>=|!=|[<>=&|~+\-*()\[\],$@]))"
)

CMP_OPS = {"=", "!=", "<", "<=", ">", ">="}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    # -- helpers ----------------------------------------------------------------
    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str):
        raise FormulaSyntaxError(message, self.peek()[2], self.text)

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value and self.peek()[0] != "end":
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            self.error(f"expected {value!r}")

    def ident(self) -> str:
        kind, value, _ = self.peek()
        if kind != "ident":
            self.error("expected an identifier")
        self.i += 1
        return value

    # -- formulas -----------------------------------------------------------------
    def parse(self):
        f = self.formula()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def formula(self):
        left = self.implication()
        while self.accept("<=>"):
            left = BinOp("<=>", left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.accept("=>"):
            return BinOp("=>", left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("|"):
            left = BinOp("|", left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.accept("&"):
            left = BinOp("&", left, self.unary())
        return left

    def unary(self):
        if self.accept("~"):
            return Not(self.unary())
        kind, value, _ = self.peek()
        if kind == "ident" and value[0] in "AE" and self.peek(1)[1] != "[":
            return self.quantifier()
        return self.primary()

    def quantifier(self):
        word = self.ident()
        kind = word[0]
        names = [word[1:]] if len(word) > 1 else [self.ident()]
        while self.accept(","):
            names.append(self.ident())
        for n in names:
            if not n[0].islower():
                self.error(f"bound variable {n!r} must start with a lowercase letter")
        return Quant(kind, tuple(names), self.formula())

    def primary(self):
        kind, value, _ = self.peek()
        if kind == "ident" and value in ("true", "false"):
            self.i += 1
            return Bool(value == "true")
        if self.accept("$"):
            name = self.ident()
            self.expect("(")
            args = []
            if not self.accept(")"):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
            return Call(name, tuple(args))
        if value == "(":
            save = self.i
            try:
                return self.comparison()
            except FormulaSyntaxError:
                self.i = save
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return inner
        return self.comparison()

    def comparison(self):
        left = self.operand()
        op = self.peek()[1]
        if op not in CMP_OPS or self.peek()[0] != "op":
            self.error("expected a comparison")
        self.i += 1
        right = self.operand(allow_letter=isinstance(left, SeqIndex))
        if isinstance(left, SeqIndex) or isinstance(right, SeqIndex):
            if op not in ("=", "!="):
                self.error("sequence values compare with = or != only")
            if not isinstance(left, SeqIndex):
                left, right = right, left
            if isinstance(right, Const):
                right = Letter(right.value)
            if not isinstance(right, (SeqIndex, Letter)):
                self.error("a sequence value compares with another one or with a letter")
        return Cmp(op, left, right)

    def operand(self, allow_letter: bool = False):
        if self.accept("@"):
            kind, value, _ = self.peek()
            if kind != "num":
                self.error("expected a letter value after '@'")
            self.i += 1
            return Letter(int(value))
        kind, value, _ = self.peek()
        if kind == "ident" and self.peek(1)[1] == "[" and value[0].isupper():
            self.i += 2
            index = self.term()
            self.expect("]")
            return SeqIndex(value, index)
        return self.term()

    # -- terms ----------------------------------------------------------------------
    def term(self):
        left = self.product_term()
        while True:
            if self.accept("+"):
                left = Add(left, self.product_term())
            elif self.accept("-"):
                left = Sub(left, self.product_term())
            else:
                return left

    def product_term(self):
        left = self.atom_term()
        while self.accept("*"):
            right = self.atom_term()
            if isinstance(left, Const):
                left = Mul(left.value, right)
            elif isinstance(right, Const):
                left = Mul(right.value, left)
            else:
                self.error("multiplication needs a numeric constant factor")
        return left

    def atom_term(self):
        kind, value, _ = self.peek()
        if kind == "num":
            self.i += 1
            return Const(int(value))
        if kind == "ident":
            if not value[0].islower():
                self.error(f"variable {value!r} must start with a lowercase letter")
            self.i += 1
            return Var(value)
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        self.error("expected a term")


def parse(text: str):
    """Parse a formula; a leading ``?msd_...`` system selector is ignored."""
    text = text.strip()
    if text.startswith("?"):
        text = text.split(None, 1)[1] if " " in text else ""
    return Parser(text).parse()


def system_selector(text: str) -> str | None:
    text = text.strip()
    if text.startswith("?"):
        return text.split(None, 1)[0][1:]
    return None
