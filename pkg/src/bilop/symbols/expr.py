"""Recursive-descent parser and evaluator for symbol expressions.

Grammar (precedence low to high: +,- then *,/ then unary - then ^):

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)*
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

'-' and '/' associate to the left; '^' takes integer exponents only and
chains left, (x^2)^3.  Variables: x, xi, eta in 1D; x1, x2, xi1, xi2,
eta1, eta2 in 2D.  Functions: sin, cos, exp, sqrt, abs, log.
Parse errors carry a 1-based byte offset.
"""
from __future__ import annotations

import numpy as np

from ..errors import SymbolParseError

FUNCTIONS = ("sin", "cos", "exp", "sqrt", "abs", "log")
VARIABLES_1D = ("x", "xi", "eta")
VARIABLES_2D = ("x1", "x2", "xi1", "xi2", "eta1", "eta2")
ALL_VARIABLES = VARIABLES_1D + VARIABLES_2D

_FN_TABLE = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "log": np.log,
}


class Node:
    def free_vars(self) -> set:
        raise NotImplementedError

    def eval(self, env: dict):
        raise NotImplementedError


class Num(Node):
    def __init__(self, value: float):
        self.value = float(value)

    def free_vars(self):
        return set()

    def eval(self, env):
        return self.value

    def __repr__(self):
        return f"Num({self.value})"


class Var(Node):
    def __init__(self, name: str):
        self.name = name

    def free_vars(self):
        return {self.name}

    def eval(self, env):
        return env[self.name]

    def __repr__(self):
        return f"Var({self.name})"


class Neg(Node):
    def __init__(self, child: Node):
        self.child = child

    def free_vars(self):
        return self.child.free_vars()

    def eval(self, env):
        return -self.child.eval(env)

    def __repr__(self):
        return f"Neg({self.child!r})"


class BinOp(Node):
    def __init__(self, op: str, left: Node, right: Node):
        self.op = op
        self.left = left
        self.right = right

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def eval(self, env):
        a = self.left.eval(env)
        b = self.right.eval(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        with np.errstate(all="ignore"):
            return a / b

    def __repr__(self):
        return f"BinOp({self.op!r},{self.left!r},{self.right!r})"


class Pow(Node):
    def __init__(self, base: Node, exponent: int):
        self.base = base
        self.exponent = int(exponent)

    def free_vars(self):
        return self.base.free_vars()

    def eval(self, env):
        with np.errstate(all="ignore"):
            return self.base.eval(env) ** self.exponent

    def __repr__(self):
        return f"Pow({self.base!r},{self.exponent})"


class Call(Node):
    def __init__(self, fn: str, arg: Node):
        self.fn = fn
        self.arg = arg

    def free_vars(self):
        return self.arg.free_vars()

    def eval(self, env):
        with np.errstate(all="ignore"):
            return _FN_TABLE[self.fn](self.arg.eval(env))

    def __repr__(self):
        return f"Call({self.fn},{self.arg!r})"


class _Token:
    __slots__ = ("kind", "text", "pos")  # pos is 0-based source index

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(src: str):
    tokens = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            if j < n and src[j] in "eE" and (
                    j + 1 < n and (src[j + 1].isdigit()
                                   or (src[j + 1] in "+-" and j + 2 < n and src[j + 2].isdigit()))):
                j += 2
                while j < n and src[j].isdigit():
                    j += 1
            text = src[i:j]
            try:
                float(text)
            except ValueError:
                raise SymbolParseError(f"bad number literal '{text}'", i + 1)
            tokens.append(_Token("num", text, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(_Token("ident", src[i:j], i))
            i = j
            continue
        if c in "+-*/^(),":
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        raise SymbolParseError(f"unexpected character '{c}'", i + 1)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        t = self.tokens[self.k]
        self.k += 1
        return t

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise SymbolParseError(message, tok.pos + 1)

    def parse(self) -> Node:
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            if t.kind == ")":
                self.fail("unbalanced parenthesis", t)
            self.fail(f"unexpected '{t.text}'", t)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek().kind == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek().kind == "^":
            self.take()
            sign = 1
            if self.peek().kind == "-":
                self.take()
                sign = -1
            t = self.peek()
            if t.kind != "num" or any(ch in t.text for ch in ".eE"):
                self.fail("exponent must be an integer", t)
            self.take()
            node = Pow(node, sign * int(t.text))
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return Num(float(t.text))
        if t.kind == "(":
            self.take()
            node = self.expr()
            if self.peek().kind != ")":
                self.fail("unbalanced parenthesis")
            self.take()
            return node
        if t.kind == "ident":
            self.take()
            name = t.text
            if name in FUNCTIONS:
                if self.peek().kind != "(":
                    self.fail(f"function '{name}' needs parenthesized argument")
                self.take()
                arg = self.expr()
                nxt = self.peek()
                if nxt.kind == ",":
                    self.fail(f"function '{name}' takes one argument", nxt)
                if nxt.kind != ")":
                    self.fail("unbalanced parenthesis", nxt)
                self.take()
                return Call(name, arg)
            if name in ALL_VARIABLES:
                return Var(name)
            self.fail(f"unknown identifier '{name}'", t)
        if t.kind == ")":
            self.fail("unbalanced parenthesis", t)
        self.fail(f"expected a value, got '{t.text or 'end of input'}'", t)


def parse_symbol_expr(src: str) -> Node:
    """Parse an expression over {x, xi, eta} (or 2D names) into an AST."""
    if not src or not src.strip():
        raise SymbolParseError("empty expression", 1)
    return _Parser(src).parse()


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC_ADD if node.op in "+-" else _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def pretty(node: Node) -> str:
    """Minimal-parens rendering; pretty(parse(s)) == s for canonical s."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({pretty(node.arg)})"
    if isinstance(node, Neg):
        inner = pretty(node.child)
        if _prec(node.child) < _PREC_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) < _PREC_POW:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, BinOp):
        p = _prec(node)
        left = pretty(node.left)
        if _prec(node.left) < p:
            left = f"({left})"
        right = pretty(node.right)
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")
