"""Expression trees for univariate functions of ``x`` and a recursive-descent parser.

Grammar (whitespace is insignificant)::

    expr    := term { ("+" | "-") term }
    term    := factor { ("*" | "/") factor }
    factor  := "-" factor | power
    power   := primary [ "^" factor ]          (right-associative)
    primary := NUMBER | "x" | "i" | "pi" | IDENT "(" expr ")" | "(" expr ")"
    IDENT   := "sin" | "cos" | "exp" | "sqrt" | "log"

``^`` binds tighter than a leading minus, so ``-x^2`` is ``-(x^2)`` while
``x^-2`` is ``x^(-2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

from .errors import NonIntegerExponent, ParseError

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "log")
UNARY_OPS = ("neg",) + FUNCTIONS
BINARY_OPS = ("add", "sub", "mul", "div", "pow")


@dataclass(frozen=True)
class Const:
    """A literal: a decimal NUMBER token, ``"pi"`` or ``"i"``.

    The literal text is kept rather than a rounded value so that one tree can
    be evaluated at any precision.
    """

    literal: str

    def __str__(self):
        return self.literal


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"

    def __str__(self):
        if self.op == "neg":
            return f"(-{self.arg})"
        return f"{self.op}({self.arg})"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self):
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}[self.op]
        return f"({self.left}{sym}{self.right})"


Expr = Union[Const, Var, Unary, Binary]

X = Var()


def to_text(expr: Expr) -> str:
    """Canonical, fully parenthesised text that re-parses to the same tree."""
    return str(expr)


def contains_var(expr: Expr) -> bool:
    if isinstance(expr, Var):
        return True
    if isinstance(expr, Const):
        return False
    if isinstance(expr, Unary):
        return contains_var(expr.arg)
    return contains_var(expr.left) or contains_var(expr.right)


def exact_rational(expr: Expr):
    """Exact value of an x-free tree built from decimal literals with + - * / and
    integer powers; ``None`` when that is not possible (pi, i, functions)."""
    if isinstance(expr, Const):
        if expr.literal in ("pi", "i"):
            return None
        return Fraction(Decimal(expr.literal))
    if isinstance(expr, Var):
        return None
    if isinstance(expr, Unary):
        if expr.op != "neg":
            return None
        v = exact_rational(expr.arg)
        return None if v is None else -v
    a, b = exact_rational(expr.left), exact_rational(expr.right)
    if a is None or b is None:
        return None
    if expr.op == "add":
        return a + b
    if expr.op == "sub":
        return a - b
    if expr.op == "mul":
        return a * b
    if expr.op == "div":
        return None if b == 0 else a / b
    if b.denominator != 1 or (a == 0 and b < 0) or abs(b) > 4096:
        return None
    return a ** int(b)


def integer_exponent(expr: Expr):
    """Integer value of an x-free exponent tree, or ``None`` if it is not an integer."""
    v = exact_rational(expr)
    if v is None or v.denominator != 1:
        return None
    return int(v)


# parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str  # num | name | op | end
    text: str
    offset: int  # byte offset into the UTF-8 input


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    byte_pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", byte_pos, "a number, name, operator or parenthesis")
        lexeme = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, lexeme, byte_pos))
        pos = m.end()
        byte_pos += len(lexeme.encode("utf-8"))
    toks.append(_Tok("end", "", byte_pos))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def _expect(self, text):
        if not self._accept(text):
            self._fail(f"'{text}'")

    def _fail(self, expected):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.offset, expected)

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            self._fail("an expression")
        node = self.expr()
        if self.tok.kind != "end":
            self._fail("an operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while True:
            if self._accept("+"):
                node = Binary("add", node, self.term())
            elif self._accept("-"):
                node = Binary("sub", node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            if self._accept("*"):
                node = Binary("mul", node, self.factor())
            elif self._accept("/"):
                node = Binary("div", node, self.factor())
            else:
                return node

    def factor(self):
        if self._accept("-"):
            return Unary("neg", self.factor())
        return self.power()

    def power(self):
        base = self.primary()
        caret = self.tok
        if not self._accept("^"):
            return base
        exponent = self.factor()
        if contains_var(exponent) and contains_var(base):
            raise NonIntegerExponent("x-dependent exponent on an x-dependent base", caret.offset, "an integer literal")
        if contains_var(base) and integer_exponent(exponent) is None:
            raise NonIntegerExponent(f"non-integer exponent {to_text(exponent)} on an x-dependent base",
                                     caret.offset, "an integer literal")
        return Binary("pow", base, exponent)

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(tok.text)
        if tok.kind == "name":
            if tok.text == "x":
                self.i += 1
                return X
            if tok.text in ("i", "pi"):
                self.i += 1
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                self.i += 1
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Unary(tok.text, arg)
            raise ParseError(f"unknown name {tok.text!r}", tok.offset, "x, i, pi or one of " + ", ".join(FUNCTIONS))
        if self._accept("("):
            node = self.expr()
            self._expect(")")
            return node
        self._fail("a number, x, i, pi, a function call or '('")


def parse_expression(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises
    ------
    ParseError
        With the byte offset of the offending token and what was expected.
    NonIntegerExponent
        When an ``x``-dependent base is raised to anything but an integer literal.
    """
    return _Parser(text).parse()
