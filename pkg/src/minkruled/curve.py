"""Symbolic space curves with exact derivatives up to third order."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from minkruled.errors import UnboundParameter
from minkruled.expr import Expr, as_expr, derivative, parse

MAX_ORDER = 3


@dataclass(frozen=True)
class CurveEval:
    u: float
    p: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def __getitem__(self, order: int) -> np.ndarray:
        return (self.p, self.d1, self.d2, self.d3)[order]


@dataclass(frozen=True, eq=False)
class ExprCurve:
    """Three expression trees in ``u`` plus parameter bindings.

    Derivative trees are built once, lazily, and cached on the instance.
    """

    components: tuple[Expr, Expr, Expr]
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.components) != 3:
            raise ValueError("a curve needs exactly three components")
        object.__setattr__(self, "components", tuple(as_expr(c) for c in self.components))
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})
        missing = set().union(*(c.params() for c in self.components)) - set(self.params)
        if missing:
            raise UnboundParameter(f"unbound parameter(s): {', '.join(sorted(missing))}")

    @classmethod
    def from_strings(cls, texts: Sequence[str], params: Mapping[str, float] | None = None):
        return cls(tuple(parse(t) for t in texts), params or {})

    @cached_property
    def _derivs(self) -> tuple[tuple[Expr, Expr, Expr], ...]:
        out = [self.components]
        for _ in range(MAX_ORDER):
            out.append(tuple(c.diff() for c in out[-1]))
        return tuple(out)

    def derivative(self, order: int) -> tuple[Expr, Expr, Expr]:
        if order <= MAX_ORDER:
            return self._derivs[order]
        return tuple(derivative(c, order) for c in self.components)

    def at(self, u: float, order: int = 0) -> np.ndarray:
        return np.array([c.evaluate(u, self.params) for c in self.derivative(order)])

    def eval(self, u: float) -> CurveEval:
        return CurveEval(float(u), *(self.at(u, k) for k in range(MAX_ORDER + 1)))

    def transformed(self, matrix) -> ExprCurve:
        """Apply a constant 3x3 matrix to the curve, component-wise in the tree."""
        m = np.asarray(matrix, dtype=float)
        comps = tuple(
            sum((float(m[i, j]) * self.components[j] for j in range(3)), as_expr(0.0))
            for i in range(3)
        )
        return ExprCurve(comps, self.params)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def eval_curve(c: ExprCurve, u: float) -> CurveEval:
    return c.eval(u)
