"""Curvature oracle and closed-form reference formulas.

The oracle computes E, F, G, L, M, N directly from exact surface partials
and the unit normal; K and H follow with the sign ``eps`` keyed to the
normal (-1 timelike, +1 spacelike):

    K = -eps (LN - M^2) / (EG - F^2)
    H =  eps (GL + EN - 2FM) / (2 (EG - F^2))

The reference formulas express the same quantities through the structure
functions lambda, mu, k_g and their derivatives, per causal case. They are
transcribed term by term so the audit can report where they disagree
with the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from minkruled import lorentz as lz
from minkruled.errors import DegenerateMetric, NullNormal, NullTangent, PrintedDenominatorZero
from minkruled.lorentz import CausalClass
from minkruled.ruled import (
    DEFAULT_SIGNS,
    RuledSurface,
    SignConvention,
    StructureSample,
    SurfaceCase,
    case_from_signs,
    partials,
)

# Reference denominators at or below this magnitude count as vanishing.
DENOMINATOR_EPS = 1e-12


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float
    det1: float
    n_unit: np.ndarray
    eps_n: int


def fundamental_forms(
    surface: RuledSurface, u: float, v: float, tol: float = 1e-10, tol_null: float = 1e-9
) -> FundamentalForms:
    p = partials(surface, u, v)
    E = float(lz.inner(p.Xu, p.Xu))
    F = float(lz.inner(p.Xu, p.Xv))
    G = float(lz.inner(p.Xv, p.Xv))
    det1 = E * G - F * F
    if abs(det1) <= tol:
        raise DegenerateMetric(f"EG - F^2 = {det1:.3e} at (u, v) = ({u!r}, {v!r})")
    n_raw = lz.cross(p.Xu, p.Xv)
    if lz.causal_class(n_raw, tol_null) is CausalClass.NULL:
        raise NullNormal(f"normal is null at (u, v) = ({u!r}, {v!r})")
    n = lz.normalize(n_raw, tol_null)
    return FundamentalForms(
        E=E,
        F=F,
        G=G,
        L=float(lz.inner(p.Xuu, n)),
        M=float(lz.inner(p.Xuv, n)),
        N=0.0,  # X_vv vanishes on a ruled surface
        det1=det1,
        n_unit=n,
        eps_n=lz.sign_of(n),
    )


def gauss_mean_oracle(f: FundamentalForms) -> tuple[float, float]:
    eps = f.eps_n
    K = -eps * (f.L * f.N - f.M * f.M) / f.det1
    H = eps * (f.G * f.L + f.E * f.N - 2 * f.F * f.M) / (2 * f.det1)
    return K, H


def kappa_tau_oracle(surface: RuledSurface, u: float, tol: float = 1e-9) -> tuple[float, float | None]:
    """Curvature and torsion of the striction line, with pseudo-norms.

    Torsion is ``None`` where sigma' x sigma'' is null or zero.
    """
    sig, _ = surface.curves_at(u)
    d1, d2, d3 = sig.d1, sig.d2, sig.d3
    if not np.any(d1) or lz.causal_class(d1, tol) is CausalClass.NULL:
        raise NullTangent(f"striction tangent is null at u={u!r}")
    c = lz.cross(d1, d2)
    kappa = float(lz.norm(c)) / float(lz.norm(d1)) ** 3
    scale = max(1.0, float(np.dot(d1, d1)) * float(np.dot(d2, d2)))
    if abs(float(lz.inner(c, c))) <= tol * scale:
        return kappa, None
    tau = float(lz.inner(d1, lz.cross(d2, d3))) / float(lz.norm(c)) ** 2
    return kappa, tau


# -- reference formulas ----------------------------------------------------

FORMULAS = ("K", "H", "kappa_sq", "tau", "E", "F", "G")


def _kappa_sq(lam, dlam, mu, dmu, kg, flipped: bool):
    """Shared curvature fraction; ``flipped`` selects the (mu k_g - lambda) variant."""
    first = (mu * kg - lam) if flipped else (lam + mu * kg)
    second = (lam * dmu - mu * dlam) if flipped else (mu * dlam - lam * dmu)
    r2 = lam**2 + mu**2
    return first**2 * r2 + second**2, r2**3


def printed_terms(case: SurfaceCase, sym: Mapping[str, float], v: float) -> dict[str, tuple[float, float]]:
    """Numerator and denominator of every reference formula for ``case``."""
    lam, dlam, d2lam = sym["lam"], sym["dlam"], sym["d2lam"]
    mu, dmu, d2mu = sym["mu"], sym["dmu"], sym["d2mu"]
    kg, dkg = sym["kg"], sym["dkg"]
    r2 = lam**2 + mu**2
    w = mu * dlam - lam * dmu
    out: dict[str, tuple[float, float]] = {}

    if case is SurfaceCase.TL_SpacelikeRuling_ASpacelike:
        out["kappa_sq"] = _kappa_sq(lam, dlam, mu, dmu, kg, flipped=True)
        g = lam - mu * kg
        out["tau"] = (
            g * (-lam**2 * kg + lam * mu * kg**2 - lam * d2mu - d2lam + lam - mu * kg)
            + (2 * dlam - dkg * mu - 2 * kg * dmu) * w,
            r2 * (mu * kg - lam) ** 2 + (lam * dmu - mu * dlam) ** 2,
        )
    else:
        out["kappa_sq"] = _kappa_sq(lam, dlam, mu, dmu, kg, flipped=False)
        g = lam + mu * kg
        if case is SurfaceCase.TL_SpacelikeRuling_ATimelike:
            inner_term = lam**2 * kg - lam * mu * kg**2 + lam * d2mu - d2lam + lam + mu * kg
            tail = 2 * dlam + dkg * mu + 2 * kg * dmu
        elif case is SurfaceCase.TL_TimelikeRuling:
            inner_term = lam**2 * kg + lam * mu * kg**2 + lam * d2mu - d2lam + lam + mu * kg
            tail = 2 * dlam - dkg * mu + 2 * kg * dmu
        else:
            inner_term = lam**2 * kg - lam * mu * kg**2 + lam * d2mu - d2lam + lam + mu * kg
            tail = 2 * dlam - dkg * mu + 2 * kg * dmu
        out["tau"] = (g * inner_term + tail * w, r2 * g**2 + w**2)

    if case is SurfaceCase.TL_SpacelikeRuling_ATimelike:
        den = mu**2 - v**2
        out["K"] = (-(mu**2), den)
        out["H"] = (-mu * (lam + mu * kg) - v * (dmu - v * kg + 2 * lam * mu), 2 * den)
        E = lam**2 + mu**2 - v**2
    elif case is SurfaceCase.TL_SpacelikeRuling_ASpacelike:
        den = mu**2 + v**2 - 2 * lam**2
        out["K"] = (-(mu**2), den)
        out["H"] = (lam * v - mu * dmu + 2 * lam * mu, 2 * den)
        E = mu**2 - lam**2 + v**2
    elif case is SurfaceCase.TL_TimelikeRuling:
        den = mu**2 + v**2
        out["K"] = (mu**2, den)
        out["H"] = (mu * (lam - mu * kg) - v * (dmu - v * kg - 2 * lam * mu), 2 * den)
        E = mu**2 - lam**2 + v**2
    elif case is SurfaceCase.SL_YTimelike:
        den = mu**2 - v**2
        out["K"] = (mu**2, den)
        out["H"] = (mu * (lam + mu * kg) + v * (dmu - v * kg - 2 * lam * mu), 2 * den)
        E = mu**2 + lam**2 - v**2
    else:
        den = mu**2 + v**2 - 2 * lam**2
        out["K"] = (mu**2, den)
        out["H"] = (mu * dmu - lam * v - 2 * lam * mu, 2 * den)
        E = mu**2 - lam**2 + v**2

    out["E"] = (E, 1.0)
    out["F"] = (-lam, 1.0)
    out["G"] = (-1.0 if case is SurfaceCase.TL_TimelikeRuling else 1.0, 1.0)
    return out


def printed_formula(
    name: str,
    case: SurfaceCase,
    s: StructureSample,
    v: float,
    signs: Mapping[SurfaceCase, SignConvention] = DEFAULT_SIGNS,
) -> float:
    num, den = printed_terms(case, s.printed_symbols(signs[case]), v)[name]
    if abs(den) <= DENOMINATOR_EPS:
        raise PrintedDenominatorZero(f"{name} denominator vanishes for {case} at v={v!r}")
    return num / den


@dataclass(frozen=True)
class PrintedValues:
    K: float | None
    H: float | None
    kappa_sq: float | None
    tau: float | None


def printed_formulas(
    case: SurfaceCase,
    s: StructureSample,
    v: float,
    signs: Mapping[SurfaceCase, SignConvention] = DEFAULT_SIGNS,
) -> PrintedValues:
    """Evaluate K, H, kappa^2, tau in their reference form; a vanishing denominator yields ``None``."""
    values = {}
    for name in ("K", "H", "kappa_sq", "tau"):
        try:
            values[name] = printed_formula(name, case, s, v, signs)
        except PrintedDenominatorZero:
            values[name] = None
    return PrintedValues(**values)


@dataclass(frozen=True)
class CurvatureRecord:
    u: float
    v: float
    case: SurfaceCase
    forms: FundamentalForms
    K_oracle: float
    H_oracle: float
    kappa_oracle: float
    tau_oracle: float | None
    K_printed: float | None
    H_printed: float | None
    kappa_sq_printed: float | None
    tau_printed: float | None

    @property
    def abs_dev_K(self) -> float | None:
        return None if self.K_printed is None else abs(self.K_printed - self.K_oracle)

    @property
    def abs_dev_H(self) -> float | None:
        return None if self.H_printed is None else abs(self.H_printed - self.H_oracle)


def case_at(s: StructureSample, forms: FundamentalForms) -> SurfaceCase:
    fr = s.frame
    normal = CausalClass.SPACELIKE if forms.eps_n > 0 else CausalClass.TIMELIKE
    return case_from_signs(fr.eps_x, fr.eps_a, fr.eps_y, normal)


def curvature_record(
    surface: RuledSurface,
    u: float,
    v: float,
    s: StructureSample,
    tol_degenerate: float = 1e-10,
    tol_null: float = 1e-9,
    signs: Mapping[SurfaceCase, SignConvention] = DEFAULT_SIGNS,
) -> CurvatureRecord:
    """All oracle and reference values at one surface point.

    ``s`` must be the structure sample at ``u``; it is passed in so grid
    sweeps compute it once per row.
    """
    forms = fundamental_forms(surface, u, v, tol_degenerate, tol_null)
    case = case_at(s, forms)
    K, H = gauss_mean_oracle(forms)
    kappa, tau = kappa_tau_oracle(surface, u, tol_null)
    printed = printed_formulas(case, s, v, signs)
    return CurvatureRecord(
        u=float(u),
        v=float(v),
        case=case,
        forms=forms,
        K_oracle=K,
        H_oracle=H,
        kappa_oracle=kappa,
        tau_oracle=tau,
        K_printed=printed.K,
        H_printed=printed.H,
        kappa_sq_printed=printed.kappa_sq,
        tau_printed=printed.tau,
    )


def oracle_value(name: str, rec: CurvatureRecord) -> float | None:
    if name == "K":
        return rec.K_oracle
    if name == "H":
        return rec.H_oracle
    if name == "kappa_sq":
        return rec.kappa_oracle**2
    if name == "tau":
        return rec.tau_oracle
    return getattr(rec.forms, name)


def rel_dev(printed: float, oracle: float) -> float:
    """Deviation relative to ``max(|oracle|, 1)``."""
    return abs(printed - oracle) / max(abs(oracle), 1.0)


def is_finite(x) -> bool:
    return x is not None and math.isfinite(x)
