"""Recursive-descent parser for rational expressions in z.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' ['+' | '-'] int)?
    atom   := number ['i'] | 'i' | 'z' | '(' expr ')'

``i`` is the imaginary unit and ``z`` the only variable.  A numeric literal
may be followed by ``i`` (``0.35i``), which reads as a single imaginary
literal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .ratfun import ComplexPoly, RationalFunction

MAX_DEGREE = 64

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


class ParseError(ValueError):
    def __init__(self, offset: int, expected: set[str], found: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        what = repr(found) if found else "end of input"
        super().__init__(f"at offset {offset}: expected one of {sorted(self.expected)}, found {what}")

    def to_json(self) -> dict:
        return {"error": "parse", "offset": self.offset, "expected": sorted(self.expected), "found": self.found}


class CompileError(ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, Neg, BinOp, Pow]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _fail(self, expected):
        self._skip()
        raise ParseError(self.pos, set(expected), self.text[self.pos : self.pos + 1])

    def parse(self) -> Node:
        node = self.expr()
        if self._peek():
            self._fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self._peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self._peek() == "-":
            self.pos += 1
            return Neg(self.factor())
        base = self.atom()
        if self._peek() == "^":
            self.pos += 1
            return Pow(base, self._integer())
        return base

    def _integer(self) -> int:
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        self._skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self._fail({"integer"})
        end = m.end()
        if end < len(self.text) and self.text[end] in ".eE":
            raise ParseError(self.pos, {"integer"}, self.text[self.pos : end + 1])
        self.pos = end
        return sign * int(m.group())

    def atom(self) -> Node:
        c = self._peek()
        if c == "(":
            self.pos += 1
            node = self.expr()
            if self._peek() != ")":
                self._fail({")"})
            self.pos += 1
            return node
        if c == "z":
            self.pos += 1
            return Var()
        if c == "i":
            self.pos += 1
            return Num(1j)
        m = _NUMBER.match(self.text, self.pos) if c else None
        if m:
            self.pos = m.end()
            value = float(m.group())
            if self._peek() == "i":
                self.pos += 1
                return Num(complex(0.0, value))
            return Num(complex(value))
        if c.isalpha():
            raise ParseError(self.pos, {"z", "i"}, c)
        self._fail({"number", "i", "z", "(", "-"})


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()


def evaluate(node: Node, z):
    """Interpret the tree directly at z (scalar or array)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return np.asarray(z, dtype=complex)
    if isinstance(node, Neg):
        return -evaluate(node.operand, z)
    if isinstance(node, Pow):
        return evaluate(node.base, z) ** node.exponent
    a, b = evaluate(node.left, z), evaluate(node.right, z)
    return {"+": np.add, "-": np.subtract, "*": np.multiply, "/": np.divide}[node.op](a, b)


def _fmt_num(v: complex) -> str:
    re_, im = v.real, v.imag
    if im == 0:
        return f"{re_!r}"
    if re_ == 0:
        return f"{im!r}i"
    sign = "+" if im >= 0 or np.isnan(im) else "-"
    return f"({re_!r}{sign}{abs(im)!r}i)"


def pretty(node: Node) -> str:
    """Fully parenthesized text that parses back to an equivalent tree."""
    if isinstance(node, Num):
        s = _fmt_num(node.value)
        return f"({s})" if s.startswith("-") else s
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, Pow):
        return f"({pretty(node.base)})^{node.exponent}"
    return f"({pretty(node.left)} {node.op} {pretty(node.right)})"


def _check(R: RationalFunction) -> RationalFunction:
    if max(R.numerator.degree, R.denominator.degree) > MAX_DEGREE:
        raise CompileError(f"degree exceeds {MAX_DEGREE}")
    return R


def compile_ast(node: Node) -> RationalFunction:
    """Build the rational function bottom-up; each step is in lowest terms."""
    if isinstance(node, Num):
        return RationalFunction(ComplexPoly.constant(node.value), poles=[])
    if isinstance(node, Var):
        return RationalFunction(ComplexPoly.z(), poles=[])
    if isinstance(node, Neg):
        return -compile_ast(node.operand)
    if isinstance(node, Pow):
        base = compile_ast(node.base)
        n = node.exponent
        if abs(n) * max(base.numerator.degree, base.denominator.degree, 0) > MAX_DEGREE:
            raise CompileError(f"degree exceeds {MAX_DEGREE}")
        if n < 0:
            if base.is_zero:
                raise CompileError("zero raised to a negative power")
            base = RationalFunction(base.denominator, base.numerator)
            n = -n
        num, den = base.numerator**n, base.denominator**n
        return _check(RationalFunction(num, den))
    a, b = compile_ast(node.left), compile_ast(node.right)
    if node.op == "/" and b.is_zero:
        raise CompileError("division by the zero polynomial")
    if node.op in "*/" and a.degree + b.degree > MAX_DEGREE:
        raise CompileError(f"degree exceeds {MAX_DEGREE}")
    out = {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[node.op](b)
    return _check(out)


def compile_expression(text: str) -> RationalFunction:
    return compile_ast(parse_expression(text))
