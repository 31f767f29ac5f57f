import math
import random

import numpy as np
import pytest

from conftest import fd5
from minkruled.errors import EvalError, ParseError, UnknownFunction
from minkruled.expr import FUNCTIONS, U, BinOp, Call, Expr, Neg, Num, Param, Var, parse

DOMAINS = {
    "sin": (-3, 3),
    "cos": (-3, 3),
    "tan": (-1.2, 1.2),
    "sinh": (-3, 3),
    "cosh": (-3, 3),
    "tanh": (-3, 3),
    "exp": (-3, 3),
    "ln": (0.1, 5),
    "sqrt": (0.1, 5),
}


def test_parse_examples():
    assert parse("cos(u)") == Call("cos", U)
    assert parse("h*sinh(u)^2") == BinOp("*", Param("h"), BinOp("^", Call("sinh", U), Num(2.0)))


@pytest.mark.parametrize(
    "text, pos",
    [("v*(", 3), ("", 0), ("(u", 2), ("u)", 1), ("2 $ u", 2), ("sin u", 3), ("u +", 3)],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_unknown_function():
    with pytest.raises(UnknownFunction) as info:
        parse("1 + foo(u)")
    assert info.value.name == "foo"
    assert info.value.position == 4


@pytest.mark.parametrize(
    "text, u, expected",
    [
        ("-u^2", 3.0, -9.0),
        ("2^3^2", 0.0, 512.0),
        ("2^-1", 0.0, 0.5),
        ("u*-2", 1.5, -3.0),
        ("1 - 2 - 3", 0.0, -4.0),
        ("8 / 4 / 2", 0.0, 1.0),
        ("1.5e1 + .5", 0.0, 15.5),
        ("(u + 1) * (u - 1)", 3.0, 8.0),
    ],
)
def test_precedence_and_associativity(text, u, expected):
    assert parse(text).evaluate(u) == expected


def test_parameters():
    e = parse("a*u + b")
    assert e.params() == {"a", "b"}
    assert e.evaluate(2.0, {"a": 3, "b": 1}) == 7.0
    with pytest.raises(EvalError):
        e.evaluate(2.0, {"a": 3})


@pytest.mark.parametrize("text, u", [("ln(u)", -1.0), ("1/u", 0.0), ("sqrt(u)", -1.0), ("u^(1/3)", -8.0)])
def test_eval_domain_errors(text, u):
    with pytest.raises(EvalError):
        parse(text).evaluate(u)


def test_derivative_examples():
    assert parse("sin(u)").diff() == Call("cos", U)
    assert parse("sinh(u)").diff() == Call("cosh", U)
    d = parse("u^2").diff()
    assert d == BinOp("*", Num(2.0), U)
    assert d.evaluate(3.0) == 6.0


def test_constant_folding():
    assert parse("2*3 + 1") == Num(7.0)
    assert parse("0*u + u*1") == U
    assert parse("cos(0)") == Num(1.0)
    assert parse("1/0") == BinOp("/", Num(1.0), Num(0.0))


@pytest.mark.parametrize("fn", sorted(FUNCTIONS))
def test_function_derivatives_match_finite_differences(fn):
    rng = np.random.default_rng(hash(fn) % 2**32)
    e = parse(f"{fn}(u)")
    d = e.diff()
    lo, hi = DOMAINS[fn]
    for u in rng.uniform(lo, hi, 100):
        numeric = fd5(e.evaluate, u)
        exact = d.evaluate(u)
        assert abs(exact - numeric) <= 1e-8 * max(1.0, abs(exact))


@pytest.mark.parametrize(
    "text, lo, hi",
    [
        ("u^u", 0.2, 3),
        ("2^u", -2, 2),
        ("(u^2 + 1)^0.5", -3, 3),
        ("sin(u)^u", 0.2, 3),
        ("exp(-u^2)*cos(3*u)/(1 + u^2)", -2, 2),
        ("ln(cosh(u))*tanh(u/2)", -2, 2),
        ("sqrt(1 + sinh(u)^2) - cosh(u)", -2, 2),
        ("a*u^3 - b/u", 0.5, 2),
    ],
)
def test_composite_derivatives_to_third_order(text, lo, hi):
    env = {"a": 1.3, "b": -0.7}
    e = parse(text)
    derivs = [e]
    for _ in range(3):
        derivs.append(derivs[-1].diff())
    for u in np.linspace(lo, hi, 25):
        for k in range(1, 4):
            numeric = fd5(lambda t: derivs[k - 1].evaluate(t, env), u)
            exact = derivs[k].evaluate(u, env)
            assert abs(exact - numeric) <= 1e-7 * max(1.0, abs(exact)), (text, k, u)


@pytest.mark.parametrize(
    "text",
    [
        "h*sinh(u)^2",
        "-u^2 + 3.25e-3*cos(u/2)",
        "r*cos(u/r) - -2",
        "(1 + u)^(2 - u) / sqrt(4 + u^2)",
        "exp(-u)*ln(2 + sin(u))",
        "tan(u/3) - tanh(u)*1e10 - 0.1",
    ],
)
def test_print_parse_round_trip(text):
    env = {"h": 0.75, "r": 1.25}
    e = parse(text)
    again = parse(str(e))
    for u in np.random.default_rng(7).uniform(-1, 1, 100):
        a, b = e.evaluate(u, env), again.evaluate(u, env)
        assert abs(a - b) <= 1e-14 * max(1.0, abs(a))


def _random_tree(rnd: random.Random, depth: int) -> Expr:
    if depth == 0 or rnd.random() < 0.2:
        return rnd.choice([Num(rnd.uniform(-3, 3)), Var(), Param("p")])
    kind = rnd.choice(["neg", "bin", "bin", "call"])
    if kind == "neg":
        return Neg(_random_tree(rnd, depth - 1))
    if kind == "call":
        return Call(rnd.choice(sorted(FUNCTIONS)), _random_tree(rnd, depth - 1))
    op = rnd.choice("+-*/^")
    return BinOp(op, _random_tree(rnd, depth - 1), _random_tree(rnd, depth - 1))


def _well_formed(e) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, (Num, Var, Param)):
            if isinstance(node, Num) and not math.isfinite(node.value):
                return False
            continue
        if isinstance(node, Neg):
            stack.append(node.arg)
        elif isinstance(node, BinOp):
            if node.op not in ("+", "-", "*", "/", "^"):
                return False
            stack.extend([node.left, node.right])
        elif isinstance(node, Call):
            if node.fn not in FUNCTIONS:
                return False
            stack.append(node.arg)
        else:
            return False
        if not all(isinstance(c, Expr) for c in stack):
            return False
    return True


def test_differentiation_fuzz_never_malformed():
    rnd = random.Random(1)
    for _ in range(300):
        tree = _random_tree(rnd, rnd.randint(1, 8))
        d = tree.diff()
        assert _well_formed(d)
        assert _well_formed(parse(str(tree)))
