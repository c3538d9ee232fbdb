"""
Wronsk Potential Expression Language

Tokenizer, recursive-descent parser and printer for one-variable potentials.

Grammar (whitespace insignificant):
    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := number | 'x' | func '(' expr ')' | '(' expr ')'
    func  := exp | cosh | sinh | tanh | sech | abs

`^` is right-associative and binds tighter than unary minus, so
-x^2 = -(x^2) and 2^-x is accepted. Parsed trees evaluate on numpy arrays.
"""

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ExpressionSyntaxError

FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "cosh": np.cosh,
    "sinh": np.sinh,
    "tanh": np.tanh,
    "sech": lambda u: 1.0 / np.cosh(u),
    "abs": np.abs,
}

_BINARY: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()])"
    r"|(?P<bad>\S)"
    r")"
)


# ---------------------------------------------------------------------------
# SYNTAX TREE
# ---------------------------------------------------------------------------

class Node:
    """Expression tree node."""

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Number(Node):
    value: float

    def evaluate(self, x):
        return np.full_like(x, self.value, dtype=float)

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Variable(Node):

    def evaluate(self, x):
        return x

    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Negate(Node):
    operand: Node

    def evaluate(self, x):
        return np.negative(self.operand.evaluate(x))

    def __str__(self):
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinaryOp(Node):
    op: str
    left: Node
    right: Node

    def evaluate(self, x):
        return _BINARY[self.op](self.left.evaluate(x), self.right.evaluate(x))

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node

    def evaluate(self, x):
        return FUNCTIONS[self.func](self.arg.evaluate(x))

    def __str__(self):
        return f"{self.func}({self.arg})"


def format_expression(tree: Node) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    return str(tree)


# ---------------------------------------------------------------------------
# TOKENIZER
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str      # number | name | op | end
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # only trailing whitespace left
            break
        kind = m.lastgroup
        if kind is None:
            break
        start = m.start(kind)
        if kind == "bad":
            raise ExpressionSyntaxError(f"Unexpected character {m.group(kind)!r}", start)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# PARSER
# ---------------------------------------------------------------------------

class Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self.current
        if token.text != text or token.kind != "op":
            found = token.text or "end of input"
            raise ExpressionSyntaxError(f"Expected {text!r}, found {found!r}", token.position)
        return self._advance()

    def parse(self) -> Node:
        if self.current.kind == "end":
            raise ExpressionSyntaxError("Empty expression", 0)
        tree = self._expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(
                f"Unexpected {self.current.text!r}", self.current.position
            )
        return tree

    def _expr(self) -> Node:
        node = self._term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self._advance().text
            node = BinaryOp(op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self._advance().text
            node = BinaryOp(op, node, self._unary())
        return node

    def _unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            self._advance()
            return Negate(self._unary())
        return self._power()

    def _power(self) -> Node:
        base = self._atom()
        if self.current.kind == "op" and self.current.text == "^":
            self._advance()
            return BinaryOp("^", base, self._unary())
        return base

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Number(float(token.text))
        if token.kind == "name":
            self._advance()
            if token.text == "x":
                return Variable()
            if token.text in FUNCTIONS:
                self._expect("(")
                arg = self._expr()
                self._expect(")")
                return Call(token.text, arg)
            raise ExpressionSyntaxError(f"Unknown name {token.text!r}", token.position)
        if token.kind == "op" and token.text == "(":
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"Unexpected {found!r}", token.position)


def parse_expression(text: str) -> Node:
    """Parse `text` into an evaluable tree; raises ExpressionSyntaxError."""
    return Parser(text).parse()
