"""Signature-aware spherical Frenet frame of a director curve.

For a director ``b`` with ``|<b,b>| = |<b',b'>| = 1`` the frame is
``x = b``, ``a = b'``, ``y = cross(a, x)``. Its derivatives are

    x' = a
    a' = cx_aprime * x + k_g * y,      cx_aprime = -eps_a * eps_x
    y' = -k_g * eps_y * eps_a * a

where ``eps_v = <v,v>`` and ``k_g`` is the y-projection coefficient of a'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from minkruled import lorentz as lz
from minkruled.curve import ExprCurve
from minkruled.errors import (
    CausalClassChange,
    FrameResidual,
    NotArcLength,
    NotUnitDirector,
    NullDirectorDerivative,
    NullFrameVector,
)
from minkruled.lorentz import CausalClass


@dataclass(frozen=True)
class FrameSample:
    u: float
    x: np.ndarray
    a: np.ndarray
    y: np.ndarray
    eps_x: int
    eps_a: int
    eps_y: int
    cx_aprime: float
    cy_aprime: float
    k_g: float

    def derivatives(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(x', a', y') expanded in the frame."""
        dx = self.a
        da = self.cx_aprime * self.x + self.k_g * self.y
        dy = -self.k_g * self.eps_y * self.eps_a * self.a
        return dx, da, dy


@dataclass(frozen=True)
class DirectorCheck:
    u_samples: list[float]
    max_dev_b: float
    max_dev_db: float
    director_class: CausalClass
    derivative_class: CausalClass


def check_director(b: ExprCurve, domain: tuple[float, float], n: int = 64, tol: float = 1e-9) -> DirectorCheck:
    """Verify that ``b`` is a unit, arc-length parametrized, non-null director."""
    if n < 2:
        raise ValueError("need at least two samples")
    us = np.linspace(domain[0], domain[1], n)
    dev_b = dev_db = 0.0
    classes_b, classes_db = set(), set()
    null_at = None
    for u in us:
        p, d1 = b.at(u), b.at(u, 1)
        dev_b = max(dev_b, abs(abs(float(lz.inner(p, p))) - 1.0))
        dev_db = max(dev_db, abs(abs(float(lz.inner(d1, d1))) - 1.0))
        classes_b.add(lz.causal_class(p, tol))
        cls_db = lz.causal_class(d1, tol)
        if cls_db is CausalClass.NULL and null_at is None:
            null_at = float(u)
        classes_db.add(cls_db)
    if dev_b > tol:
        raise NotUnitDirector(f"max ||<b,b>| - 1| = {dev_b:.3e} exceeds {tol:g}")
    if null_at is not None:
        raise NullDirectorDerivative(f"b' is null at u={null_at!r}")
    if dev_db > tol:
        raise NotArcLength(f"max ||<b',b'>| - 1| = {dev_db:.3e} exceeds {tol:g}")
    if len(classes_b) > 1 or len(classes_db) > 1:
        raise CausalClassChange("causal class of b or b' changes over the domain")
    return DirectorCheck(
        [float(u) for u in us], dev_b, dev_db, classes_b.pop(), classes_db.pop()
    )


def frame(b: ExprCurve, u: float, tol: float = 1e-9) -> FrameSample:
    x, a, b2 = b.at(u), b.at(u, 1), b.at(u, 2)
    y = lz.cross(a, x)
    for name, v in (("x", x), ("a", a), ("y", y)):
        if not np.any(v) or lz.causal_class(v, tol) is CausalClass.NULL:
            raise NullFrameVector(f"frame vector {name} is null at u={u!r}")
    qx, qa, qy = (float(lz.inner(v, v)) for v in (x, a, y))
    cx = float(lz.inner(b2, x)) / qx
    cy = float(lz.inner(b2, y)) / qy
    residual = float(np.linalg.norm(b2 - cx * x - cy * y))
    if residual > tol * max(1.0, float(np.linalg.norm(b2))):
        raise FrameResidual(f"b'' leaves the x-y plane at u={u!r} (residual {residual:.3e})")
    return FrameSample(
        u=float(u),
        x=x,
        a=a,
        y=y,
        eps_x=1 if qx > 0 else -1,
        eps_a=1 if qa > 0 else -1,
        eps_y=1 if qy > 0 else -1,
        cx_aprime=cx,
        cy_aprime=cy,
        k_g=cy,
    )


def pitch(alpha: ExprCurve, b: ExprCurve, u: float) -> float:
    """``-<alpha'(u), b(u)>``."""
    return -float(lz.inner(alpha.at(u, 1), b.at(u)))


def angle_density(b: ExprCurve, u: float) -> float:
    """``-<(b' x b)', b'>``, using ``(b' x b)' = b'' x b``."""
    return -float(lz.inner(lz.cross(b.at(u, 2), b.at(u)), b.at(u, 1)))
