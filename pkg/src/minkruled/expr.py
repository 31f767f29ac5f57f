"""Single-variable expression trees: parsing, evaluation, differentiation.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := unary (("*"|"/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

``u`` is the variable, the names in ``FUNCTIONS`` are functions, and every
other identifier is a named parameter bound at evaluation time. Only
constant folding is done on construction; trees are compared by value,
not by canonical form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from minkruled.errors import EvalError, ParseError, UnknownFunction

VARIABLE = "u"

_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}
FUNCTIONS = frozenset(_FUNCS)


def _apply(op: str, a: float, b: float) -> float:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0.0:
            raise EvalError("division by zero")
        return a / b
    # math.pow raises on negative base with fractional exponent instead of going complex
    return math.pow(a, b)


class Expr:
    """Base of the expression node types.

    Arithmetic operators build new trees with constant folding, which is
    how the striction curve and transformed curves are assembled.
    """

    __slots__ = ()

    def evaluate(self, u: float, env: Mapping[str, float] | None = None) -> float:
        try:
            value = self._eval(float(u), env or {})
        except EvalError:
            raise
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvalError(f"cannot evaluate {self} at u={u!r}: {exc}") from None
        if not math.isfinite(value):
            raise EvalError(f"non-finite value of {self} at u={u!r}")
        return value

    def _eval(self, u: float, env: Mapping[str, float]) -> float:
        raise NotImplementedError

    def diff(self) -> Expr:
        """Derivative with respect to ``u``."""
        raise NotImplementedError

    @property
    def has_var(self) -> bool:
        raise NotImplementedError

    def params(self) -> frozenset[str]:
        raise NotImplementedError

    def size(self) -> int:
        raise NotImplementedError

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: float

    def _eval(self, u, env):
        return self.value

    def diff(self):
        return ZERO

    has_var = False

    def params(self):
        return frozenset()

    def size(self):
        return 1

    def __str__(self):
        text = repr(float(self.value))
        return f"({text})" if self.value < 0 or text.startswith("-") else text


@dataclass(frozen=True, eq=True)
class Var(Expr):
    def _eval(self, u, env):
        return u

    def diff(self):
        return ONE

    has_var = True

    def params(self):
        return frozenset()

    def size(self):
        return 1

    def __str__(self):
        return VARIABLE


@dataclass(frozen=True, eq=True)
class Param(Expr):
    name: str

    def _eval(self, u, env):
        try:
            return float(env[self.name])
        except KeyError:
            raise EvalError(f"parameter {self.name!r} is not bound") from None

    def diff(self):
        return ZERO

    has_var = False

    def params(self):
        return frozenset([self.name])

    def size(self):
        return 1

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr

    def _eval(self, u, env):
        return -self.arg._eval(u, env)

    def diff(self):
        return neg(self.arg.diff())

    @cached_property
    def has_var(self):
        return self.arg.has_var

    def params(self):
        return self.arg.params()

    def size(self):
        return 1 + self.arg.size()

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def _eval(self, u, env):
        return _apply(self.op, self.left._eval(u, env), self.right._eval(u, env))

    def diff(self):
        f, g = self.left, self.right
        op = self.op
        if op in "+-":
            return add(f.diff(), g.diff()) if op == "+" else sub(f.diff(), g.diff())
        if op == "*":
            return add(mul(f.diff(), g), mul(f, g.diff()))
        if op == "/":
            return div(sub(mul(f.diff(), g), mul(f, g.diff())), power(g, TWO))
        # power
        if not g.has_var:
            return mul(mul(g, power(f, sub(g, ONE))), f.diff())
        if not f.has_var:
            return mul(mul(self, call("ln", f)), g.diff())
        # f^g = exp(g ln f)
        return mul(self, add(mul(g.diff(), call("ln", f)), div(mul(g, f.diff()), f)))

    @cached_property
    def has_var(self):
        return self.left.has_var or self.right.has_var

    def params(self):
        return self.left.params() | self.right.params()

    def size(self):
        return 1 + self.left.size() + self.right.size()

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True, eq=True)
class Call(Expr):
    fn: str
    arg: Expr

    def _eval(self, u, env):
        x = self.arg._eval(u, env)
        if self.fn == "ln" and x <= 0.0:
            raise EvalError(f"ln of non-positive value {x!r}")
        if self.fn == "sqrt" and x < 0.0:
            raise EvalError(f"sqrt of negative value {x!r}")
        return _FUNCS[self.fn](x)

    def diff(self):
        x = self.arg
        fn = self.fn
        if fn == "sin":
            outer = call("cos", x)
        elif fn == "cos":
            outer = neg(call("sin", x))
        elif fn == "tan":
            outer = div(ONE, power(call("cos", x), TWO))
        elif fn == "sinh":
            outer = call("cosh", x)
        elif fn == "cosh":
            outer = call("sinh", x)
        elif fn == "tanh":
            outer = sub(ONE, power(self, TWO))
        elif fn == "exp":
            outer = self
        elif fn == "ln":
            outer = div(ONE, x)
        else:  # sqrt
            outer = div(ONE, mul(TWO, self))
        return mul(outer, x.diff())

    @cached_property
    def has_var(self):
        return self.arg.has_var

    def params(self):
        return self.arg.params()

    def size(self):
        return 1 + self.arg.size()

    def __str__(self):
        return f"{self.fn}({self.arg})"


ZERO = Num(0.0)
ONE = Num(1.0)
TWO = Num(2.0)
U = Var()


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float)):
        return Num(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Num) and e.value == value


def _fold(op: str, a: Expr, b: Expr) -> Expr | None:
    if isinstance(a, Num) and isinstance(b, Num):
        try:
            value = _apply(op, a.value, b.value)
        except (EvalError, ValueError, ZeroDivisionError, OverflowError):
            return None
        if math.isfinite(value):
            return Num(value)
    return None


def add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return _fold("+", a, b) or BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    return _fold("-", a, b) or BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if _is(a, -1.0):
        return neg(b)
    if _is(b, -1.0):
        return neg(a)
    return _fold("*", a, b) or BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is(b, 1.0):
        return a
    if _is(a, 0.0) and not _is(b, 0.0):
        return ZERO
    return _fold("/", a, b) or BinOp("/", a, b)


def power(a: Expr, b: Expr) -> Expr:
    if _is(b, 1.0):
        return a
    if _is(b, 0.0):
        return ONE
    return _fold("^", a, b) or BinOp("^", a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def call(fn: str, arg: Expr) -> Expr:
    if fn not in FUNCTIONS:
        raise UnknownFunction(fn, -1)
    node = Call(fn, arg)
    if isinstance(arg, Num):
        try:
            return Num(node.evaluate(0.0))
        except EvalError:
            pass
    return node


def derivative(e: Expr, order: int = 1) -> Expr:
    for _ in range(order):
        e = e.diff()
    return e


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(bad, f"unexpected character {text[bad]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.tok
        if text != value or kind != "op":
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(pos, f"expected {value!r}, found {found}")
        self.i += 1

    def expr(self) -> Expr:
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = mul(node, rhs) if op == "*" else div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.tok == ("op", "-", self.tok[2]):
            self.take()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            return power(base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if self.tok[0] == "op" and self.tok[1] == "(":
                if text not in FUNCTIONS:
                    raise UnknownFunction(text, pos)
                self.take()
                arg = self.expr()
                self.expect(")")
                return call(text, arg)
            if text in FUNCTIONS:
                raise ParseError(pos + len(text), f"expected '(' after function {text!r}")
            return U if text == VARIABLE else Param(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "eof" else repr(text)
        raise ParseError(pos, f"unexpected {found}")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    >>> str(parse("h*sinh(u)^2"))
    '(h * (sinh(u) ^ 2.0))'
    """
    if not text or not text.strip():
        raise ParseError(0, "empty expression")
    p = _Parser(text)
    node = p.expr()
    kind, tok, pos = p.tok
    if kind != "eof":
        raise ParseError(pos, f"unexpected {tok!r}")
    return node
