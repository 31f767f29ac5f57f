"""Ruled surfaces ``X(u, v) = sigma(u) + v b(u)`` on their striction line.

The base curve given by the user is replaced by its striction curve
``sigma = alpha - (<alpha', b'> / <b', b'>) b``, built symbolically so that
sigma', sigma'' and sigma''' stay exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from minkruled import lorentz as lz
from minkruled.curve import ExprCurve
from minkruled.errors import (
    DegenerateMetric,
    DevelopableSurface,
    GeometryError,
    NullNormal,
    NullRulingDerivative,
    StrictionResidual,
)
from minkruled.expr import Expr
from minkruled.framing import DirectorCheck, FrameSample, angle_density, check_director, frame
from minkruled.lorentz import CausalClass

TOL_DEV = 1e-6
STRICTION_RESIDUAL = 1e-7
DEFAULT_STEP = 1e-4


class SurfaceCase(enum.Enum):
    """Causal case of a surface point.

    TL_* cases are timelike surfaces (spacelike normal), SL_* spacelike
    surfaces (timelike normal). The suffix names the causal character of
    the ruling b, of the frame vector a = b', or of y = a x b.
    """

    TL_SpacelikeRuling_ATimelike = "TL_SpacelikeRuling_ATimelike"
    TL_SpacelikeRuling_ASpacelike = "TL_SpacelikeRuling_ASpacelike"
    TL_TimelikeRuling = "TL_TimelikeRuling"
    SL_YTimelike = "SL_YTimelike"
    SL_YSpacelike = "SL_YSpacelike"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SignConvention:
    """Relation of the reference-formula symbols to the canonical coefficients.

    ``lambda = lam * cx`` and ``k_g(printed) = kg * k_g(canonical)``.
    """

    lam: int
    kg: int


# The reference Frenet systems write a' = eps x - k_g y, so their k_g is the
# negative of the y-projection coefficient in every case.
DEFAULT_SIGNS: Mapping[SurfaceCase, SignConvention] = {
    SurfaceCase.TL_SpacelikeRuling_ATimelike: SignConvention(lam=-1, kg=-1),
    SurfaceCase.TL_SpacelikeRuling_ASpacelike: SignConvention(lam=1, kg=-1),
    SurfaceCase.TL_TimelikeRuling: SignConvention(lam=-1, kg=-1),
    SurfaceCase.SL_YTimelike: SignConvention(lam=1, kg=-1),
    SurfaceCase.SL_YSpacelike: SignConvention(lam=1, kg=-1),
}


def case_from_signs(eps_x: int, eps_a: int, eps_y: int, normal: CausalClass) -> SurfaceCase:
    if normal is CausalClass.NULL:
        raise NullNormal("surface normal is null")
    if normal is CausalClass.SPACELIKE:
        if eps_x < 0:
            return SurfaceCase.TL_TimelikeRuling
        if eps_a < 0:
            return SurfaceCase.TL_SpacelikeRuling_ATimelike
        return SurfaceCase.TL_SpacelikeRuling_ASpacelike
    if eps_x < 0:
        raise GeometryError("a spacelike surface cannot carry a timelike ruling")
    return SurfaceCase.SL_YTimelike if eps_y < 0 else SurfaceCase.SL_YSpacelike


def _inner_expr(p, q) -> Expr:
    return p[0] * q[0] + p[1] * q[1] - p[2] * q[2]


def striction_offset_expr(alpha: ExprCurve, b: ExprCurve) -> Expr:
    """``<alpha', b'> / <b', b'>`` as an expression tree."""
    a1, b1 = alpha.derivative(1), b.derivative(1)
    return _inner_expr(a1, b1) / _inner_expr(b1, b1)


def striction_curve(alpha: ExprCurve, b: ExprCurve) -> ExprCurve:
    offset = striction_offset_expr(alpha, b)
    comps = tuple(ac - offset * bc for ac, bc in zip(alpha.components, b.components))
    return ExprCurve(comps, {**alpha.params, **b.params})


def striction(alpha: ExprCurve, b: ExprCurve, u: float, tol: float = 1e-9) -> tuple[np.ndarray, float]:
    """Point of the striction line at ``u`` and the ruling offset that reaches it from alpha."""
    a1, b1 = alpha.at(u, 1), b.at(u, 1)
    q = float(lz.inner(b1, b1))
    if lz.causal_class(b1, tol) is CausalClass.NULL or q == 0.0:
        raise NullRulingDerivative(f"b' is null at u={u!r}")
    offset = float(lz.inner(a1, b1)) / q
    return alpha.at(u) - offset * b.at(u), offset


@dataclass(frozen=True, eq=False)
class RuledSurface:
    alpha: ExprCurve
    b: ExprCurve
    domain_u: tuple[float, float]
    domain_v: tuple[float, float]
    name: str = "surface"
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    @cached_property
    def sigma(self) -> ExprCurve:
        return striction_curve(self.alpha, self.b)

    @cached_property
    def offset(self) -> Expr:
        return striction_offset_expr(self.alpha, self.b)

    def curves_at(self, u: float):
        """(sigma, b) evaluations at ``u``, memoized."""
        u = float(u)
        hit = self._cache.get(u)
        if hit is None:
            hit = self._cache[u] = (self.sigma.eval(u), self.b.eval(u))
        return hit

    def check(self, n: int = 64, tol: float = 1e-9, tol_dev: float = TOL_DEV) -> DirectorCheck:
        """Run the director check and the non-developability gate on ``domain_u``."""
        report = check_director(self.b, self.domain_u, n, tol)
        for u in report.u_samples:
            s = structure_sample(self, u, tol=tol)
            if abs(s.mu) <= tol_dev:
                raise DevelopableSurface(f"|mu| = {abs(s.mu):.3e} <= {tol_dev:g} at u={u!r}")
        return report

    def transformed(self, matrix) -> RuledSurface:
        return RuledSurface(
            self.alpha.transformed(matrix), self.b.transformed(matrix),
            self.domain_u, self.domain_v, self.name,
        )


def evaluate(surface: RuledSurface, u: float, v: float) -> np.ndarray:
    sig, b = surface.curves_at(u)
    return sig.p + v * b.p


@dataclass(frozen=True)
class Partials:
    Xu: np.ndarray
    Xv: np.ndarray
    Xuu: np.ndarray
    Xuv: np.ndarray
    Xvv: np.ndarray


def partials(surface: RuledSurface, u: float, v: float) -> Partials:
    sig, b = surface.curves_at(u)
    return Partials(
        Xu=sig.d1 + v * b.d1,
        Xv=b.p,
        Xuu=sig.d2 + v * b.d2,
        Xuv=b.d1,
        Xvv=np.zeros(3),
    )


@dataclass(frozen=True)
class StructureSample:
    u: float
    cx: float
    cy: float
    k_g: float
    lambda_printed: float
    mu: float
    delta: float
    theta: float
    d_cx: float
    d2_cx: float
    d_cy: float
    d2_cy: float
    d_kg: float
    frame: FrameSample
    developable: bool

    def printed_symbols(self, signs: SignConvention) -> dict[str, float]:
        """Structure functions under a given sign convention."""
        return {
            "lam": signs.lam * self.cx,
            "dlam": signs.lam * self.d_cx,
            "d2lam": signs.lam * self.d2_cx,
            "mu": self.cy,
            "dmu": self.d_cy,
            "d2mu": self.d2_cy,
            "kg": signs.kg * self.k_g,
            "dkg": signs.kg * self.d_kg,
        }


def _coefficients(surface: RuledSurface, u: float) -> np.ndarray:
    sig, b = surface.curves_at(u)
    x, a = b.p, b.d1
    y = lz.cross(a, x)
    qx, qy = float(lz.inner(x, x)), float(lz.inner(y, y))
    return np.array([
        float(lz.inner(sig.d1, x)) / qx,
        float(lz.inner(sig.d1, y)) / qy,
        float(lz.inner(b.d2, y)) / qy,
    ])


def richardson_derivatives(f, u: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    """First and second derivatives by central differences with one Richardson level."""
    f0 = f(u)
    fp, fm = f(u + h), f(u - h)
    fp2, fm2 = f(u + h / 2), f(u - h / 2)
    d1 = (4 * (fp2 - fm2) / h - (fp - fm) / (2 * h)) / 3
    d2 = (4 * (fp2 - 2 * f0 + fm2) / (h / 2) ** 2 - (fp - 2 * f0 + fm) / h**2) / 3
    return d1, d2


def structure_sample(
    surface: RuledSurface,
    u: float,
    h: float = DEFAULT_STEP,
    case: SurfaceCase | None = None,
    tol: float = 1e-9,
    signs: Mapping[SurfaceCase, SignConvention] = DEFAULT_SIGNS,
) -> StructureSample:
    """Structure functions of the surface at ``u``.

    ``lambda_printed`` uses the sign convention of ``case``; without a case
    it equals ``cx``.
    """
    fr = frame(surface.b, u, tol)
    sig, b = surface.curves_at(u)
    sp = sig.d1
    cx = float(lz.inner(sp, fr.x)) * fr.eps_x
    cy = float(lz.inner(sp, fr.y)) * fr.eps_y
    residual = float(np.linalg.norm(sp - cx * fr.x - cy * fr.y))
    if residual > STRICTION_RESIDUAL * max(1.0, float(np.linalg.norm(sp))):
        raise StrictionResidual(f"sigma' leaves the x-y plane at u={u!r} (residual {residual:.3e})")
    d1, d2 = richardson_derivatives(lambda t: _coefficients(surface, t), float(u), h)
    lam_sign = signs[case].lam if case is not None else 1
    return StructureSample(
        u=float(u),
        cx=cx,
        cy=cy,
        k_g=fr.k_g,
        lambda_printed=lam_sign * cx,
        mu=cy,
        delta=-float(lz.inner(sp, b.p)),
        theta=angle_density(surface.b, u),
        d_cx=float(d1[0]),
        d2_cx=float(d2[0]),
        d_cy=float(d1[1]),
        d2_cy=float(d2[1]),
        d_kg=float(d1[2]),
        frame=fr,
        developable=abs(cy) <= TOL_DEV,
    )


def metric_determinant(p: Partials) -> float:
    E = float(lz.inner(p.Xu, p.Xu))
    F = float(lz.inner(p.Xu, p.Xv))
    G = float(lz.inner(p.Xv, p.Xv))
    return E * G - F * F


def classify(
    surface: RuledSurface, u: float, v: float, tol: float = 1e-10, tol_null: float = 1e-9
) -> SurfaceCase:
    p = partials(surface, u, v)
    det1 = metric_determinant(p)
    if abs(det1) <= tol:
        raise DegenerateMetric(f"EG - F^2 = {det1:.3e} at (u, v) = ({u!r}, {v!r})")
    normal = lz.causal_class(lz.cross(p.Xu, p.Xv), tol_null)
    fr = frame(surface.b, u, tol_null)
    return case_from_signs(fr.eps_x, fr.eps_a, fr.eps_y, normal)
