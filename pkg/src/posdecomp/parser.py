"""Expression front end: text -> AST -> MultiRationalFunction.

Grammar (usual precedence, ``^`` binds tightest and is right-associative,
unary minus binds looser than ``^`` so ``-x^2`` is ``-(x^2)``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' exponent)?
    exponent:= INT ('^' exponent)? | '(' exponent ')'
    atom    := INT | VAR | '(' expr ')'

Variables are ``x`` for one variable and ``x1`` .. ``xm`` otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityError, ParseError, ZeroDenominatorError
from .qexact import MultiPoly, MultiRationalFunction, RationalFunction, UniPoly, format_multi_rational


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    index: int  # 0-based


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d*)|([-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "var", "op", "end"
    text: str
    pos: int


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def tokenize(text: str) -> list:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            out.append(Token("end", "", pos))
            return out
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("var", m.group(2), start))
        else:
            out.append(Token("op", m.group(3), start))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, arity: int):
        self.text = text
        self.arity = arity
        self.toks = tokenize(text)
        self.i = 0

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.toks[self.i]
        line, col = _line_col(self.text, tok.pos)
        raise ParseError(msg, line, col)

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, op: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            found = self.cur.text or "end of input"
            self.error(f"expected {op!r}, found {found!r}")

    def parse(self):
        if self.cur.kind == "end":
            self.error("empty expression")
        node = self.expr()
        if self.cur.kind != "end":
            self.error(f"unexpected {self.cur.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        if self.accept("("):
            e = self.exponent()
            self.expect(")")
        elif self.cur.kind == "int":
            e = int(self.take().text)
        else:
            self.error("exponent must be a non-negative integer literal")
        if self.accept("^"):
            e = e ** self.exponent()
        return e

    def atom(self):
        t = self.cur
        if t.kind == "int":
            self.i += 1
            return Const(Fraction(int(t.text)))
        if t.kind == "var":
            self.i += 1
            return Var(self._var_index(t))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a number, a variable or '('" if t.kind != "end" else "unexpected end of input")

    def _var_index(self, t: Token) -> int:
        name = t.text
        if name == "x":
            if self.arity != 1:
                self.error(f"bare 'x' is only allowed for one variable; use x1..x{self.arity}", t)
            return 0
        k = int(name[1:])
        if not 1 <= k <= self.arity:
            line, col = _line_col(self.text, t.pos)
            raise ArityError(f"variable {name} out of range for arity {self.arity} "
                             f"(line {line}, column {col})")
        return k - 1


def parse_ast(text: str, arity: int = 1):
    if arity < 1:
        raise ArityError("arity must be at least 1")
    return _Parser(text, arity).parse()


def lower(node, arity: int) -> MultiRationalFunction:
    if isinstance(node, Const):
        return MultiRationalFunction.const(node.value, arity)
    if isinstance(node, Var):
        return MultiRationalFunction.var(node.index, arity)
    if isinstance(node, Neg):
        return -lower(node.operand, arity)
    if isinstance(node, Pow):
        return lower(node.base, arity) ** node.exponent
    a = lower(node.left, arity)
    b = lower(node.right, arity)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b.is_zero():
        raise ZeroDenominatorError("division by the zero polynomial")
    return a / b


def parse_expr(text: str, arity: int = 1) -> MultiRationalFunction:
    return lower(parse_ast(text, arity), arity)


def parse_rational_function(text: str) -> RationalFunction:
    return parse_expr(text, 1).to_univariate()


def parse_poly(text: str) -> UniPoly:
    r = parse_rational_function(text)
    if not r.is_polynomial():
        raise ParseError(f"expected a polynomial, got {r}")
    return r.as_poly()


def parse_multipoly(text: str, arity: int) -> MultiPoly:
    r = parse_expr(text, arity)
    if not r.den.is_constant():
        raise ParseError(f"expected a polynomial, got {r}")
    return r.num * (1 / r.den.constant_value())


def to_text(r) -> str:
    """Printable form that parses back to the same canonical value."""
    if isinstance(r, RationalFunction):
        r = MultiRationalFunction.from_univariate(r)
    if isinstance(r, UniPoly):
        r = MultiRationalFunction.from_univariate(RationalFunction(r))
    if isinstance(r, MultiPoly):
        r = MultiRationalFunction(r)
    return format_multi_rational(r)


__all__ = [
    "Const", "Var", "Neg", "BinOp", "Pow", "Token", "tokenize", "parse_ast", "lower",
    "parse_expr", "parse_rational_function", "parse_poly", "parse_multipoly", "to_text",
]
