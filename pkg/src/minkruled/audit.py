"""Grid audit of the reference formulas against the curvature oracle."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from minkruled.curvature import (
    DENOMINATOR_EPS,
    FORMULAS,
    CurvatureRecord,
    curvature_record,
    is_finite,
    oracle_value,
    printed_terms,
    rel_dev,
)
from minkruled.errors import DegenerateMetric, EmptyGrid, NullNormal
from minkruled.ruled import (
    DEFAULT_SIGNS,
    DEFAULT_STEP,
    RuledSurface,
    SignConvention,
    StructureSample,
    SurfaceCase,
    structure_sample,
)

VERDICT_TOL = 1e-6
# Candidate deviations below this are round-off and tie with each other.
NOISE_FLOOR = 1e-9


class Verdict(enum.Enum):
    MATCHES = "Matches"
    MATCHES_UP_TO_SIGN = "MatchesUpToSign"
    MATCHES_WITH_SQUARED_DENOMINATOR = "MatchesWithSquaredDenominator"
    MISMATCH = "Mismatch"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FormulaAudit:
    name: str
    case: SurfaceCase
    samples: int
    max_abs_dev: float
    mean_abs_dev: float
    max_rel_dev: float
    candidate_rel_devs: Mapping[Verdict, float]

    @property
    def verdict(self) -> Verdict:
        return choose_verdict(self.candidate_rel_devs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "case": self.case.value,
            "max_abs_dev": self.max_abs_dev,
            "mean_abs_dev": self.mean_abs_dev,
            "max_rel_dev": self.max_rel_dev,
            "verdict": self.verdict.value,
        }


@dataclass
class AuditReport:
    surface: str
    nu: int
    nv: int
    skipped: int
    case_counts: dict[SurfaceCase, int]
    formulas: list[FormulaAudit]
    notes: list[str] = field(default_factory=list)

    def formula(self, name: str, case: SurfaceCase | None = None) -> FormulaAudit:
        for f in self.formulas:
            if f.name == name and (case is None or f.case is case):
                return f
        raise KeyError((name, case))

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "grid": {"nu": self.nu, "nv": self.nv, "skipped": self.skipped},
            "formulas": [f.to_dict() for f in self.formulas],
            "notes": list(self.notes),
        }


def choose_verdict(candidates: Mapping[Verdict, float], tol: float = VERDICT_TOL) -> Verdict:
    """Smallest candidate deviation under ``tol`` wins.

    Ties, including deviations that are all below ``NOISE_FLOOR``, go to
    the earlier verdict in taxonomy order.
    """
    order = [
        Verdict.MATCHES,
        Verdict.MATCHES_UP_TO_SIGN,
        Verdict.MATCHES_WITH_SQUARED_DENOMINATOR,
    ]

    def key(v):
        dev = candidates[v]
        return (0.0 if dev < NOISE_FLOOR else dev, order.index(v))

    best = min(order, key=key)
    return best if candidates[best] < tol else Verdict.MISMATCH


@dataclass(frozen=True)
class _Point:
    s: StructureSample
    rec: CurvatureRecord


def _terms(p: _Point, signs: SignConvention):
    return printed_terms(p.rec.case, p.s.printed_symbols(signs), p.rec.v)


def _compare(name: str, case: SurfaceCase, points: list[_Point], signs) -> tuple[FormulaAudit | None, int, int]:
    """Deviation summary of one formula in one case, plus undefined counts."""
    abs_devs, rel_plain, rel_sign, rel_sq = [], [], [], []
    oracle_undefined = reference_undefined = 0
    for p in points:
        o = oracle_value(name, p.rec)
        num, den = _terms(p, signs[case])[name]
        if not is_finite(o):
            oracle_undefined += 1
            continue
        if abs(den) <= DENOMINATOR_EPS:
            reference_undefined += 1
            continue
        value = num / den
        abs_devs.append(abs(value - o))
        rel_plain.append(rel_dev(value, o))
        rel_sign.append(rel_dev(value, -o))
        rel_sq.append(rel_dev(num / (den * den), o))
    if not abs_devs:
        return None, oracle_undefined, reference_undefined
    audit = FormulaAudit(
        name=name,
        case=case,
        samples=len(abs_devs),
        max_abs_dev=max(abs_devs),
        mean_abs_dev=math.fsum(abs_devs) / len(abs_devs),
        max_rel_dev=max(rel_plain),
        candidate_rel_devs={
            Verdict.MATCHES: max(rel_plain),
            Verdict.MATCHES_UP_TO_SIGN: max(rel_sign),
            Verdict.MATCHES_WITH_SQUARED_DENOMINATOR: max(rel_sq),
        },
    )
    return audit, oracle_undefined, reference_undefined


def _max_rel(name: str, points: list[_Point], signs: SignConvention) -> float | None:
    devs = []
    for p in points:
        o = oracle_value(name, p.rec)
        num, den = _terms(p, signs)[name]
        if is_finite(o) and abs(den) > DENOMINATOR_EPS:
            devs.append(rel_dev(num / den, o))
    return max(devs) if devs else None


def _fmt(x: float) -> str:
    return f"{x:.6e}"


def _sign_word(x: int, what: str) -> str:
    return f"{what}={'+' if x > 0 else '-'}"


# a' x-coefficient as written in the reference Frenet system of each case
_REFERENCE_FRENET_X = {
    SurfaceCase.TL_SpacelikeRuling_ATimelike: 1,
    SurfaceCase.TL_SpacelikeRuling_ASpacelike: -1,
    SurfaceCase.TL_TimelikeRuling: -1,
    SurfaceCase.SL_YTimelike: -1,
    SurfaceCase.SL_YSpacelike: 1,
}


def _notes(by_case: dict[SurfaceCase, list[_Point]], undefined: list[str], signs) -> list[str]:
    notes = [
        "vector product uses the determinant convention <x X y, z> = det(x, y, z)",
        "relative deviation = |reference - oracle| / max(|oracle|, 1)",
    ]
    for case, pts in by_case.items():
        notes.append(f"case {case.value}: {len(pts)} samples")
    notes.extend(undefined)
    for case, pts in by_case.items():
        observed = sorted({int(round(p.s.frame.cx_aprime)) for p in pts})
        ref = _REFERENCE_FRENET_X[case]
        agree = "agrees" if observed == [ref] else "disagrees"
        notes.append(
            f"frenet {case.value}: a' x-coefficient observed {observed}, reference {ref:+d} ({agree})"
        )
        ratios = sorted({int(np.sign(p.s.theta / p.s.k_g)) for p in pts if abs(p.s.k_g) > 1e-9})
        if ratios:
            eps_y = sorted({p.s.frame.eps_y for p in pts})
            notes.append(
                f"angle density {case.value}: sign(theta / k_g) = {ratios}, eps_y = {eps_y}"
            )
        else:
            notes.append(f"angle density {case.value}: k_g = 0, theta / k_g not observable")
    combos = [SignConvention(lam, kg) for lam, kg in itertools.product((1, -1), repeat=2)]
    for case, pts in by_case.items():
        default = signs[case]
        for name in ("F", "H", "kappa_sq", "tau"):
            devs = {c: _max_rel(name, pts, c) for c in combos}
            if any(d is None for d in devs.values()):
                continue
            floored = {c: 0.0 if d < NOISE_FLOOR else d for c, d in devs.items()}
            best = min(combos, key=lambda c: (floored[c], c != default))
            spread = max(floored.values()) - min(floored.values())
            label = "insensitive" if spread <= 1e-12 * max(floored.values()) else "best"
            notes.append(
                f"sign pin {case.value} {name}: {label} "
                f"{_sign_word(best.lam, 'lambda_sign')} {_sign_word(best.kg, 'kg_sign')} "
                f"max_rel_dev {_fmt(devs[best])}; default "
                f"{_sign_word(default.lam, 'lambda_sign')} {_sign_word(default.kg, 'kg_sign')} "
                f"max_rel_dev {_fmt(devs[default])}"
            )
    return notes


def audit(
    surface: RuledSurface,
    nu: int = 32,
    nv: int = 32,
    step: float = DEFAULT_STEP,
    tol_null: float = 1e-9,
    tol_degenerate: float = 1e-10,
    signs: Mapping[SurfaceCase, SignConvention] = DEFAULT_SIGNS,
) -> AuditReport:
    """Compare every reference formula with the oracle over a ``nu`` x ``nv`` grid.

    Degenerate grid points are skipped and counted. Raises ``EmptyGrid``
    when nothing is left.
    """
    if nu < 2 or nv < 2:
        raise ValueError("grid needs at least 2 x 2 points")
    us = np.linspace(*surface.domain_u, nu)
    vs = np.linspace(*surface.domain_v, nv)
    points: list[_Point] = []
    skipped = 0
    for u in us:
        s = structure_sample(surface, float(u), step, tol=tol_null, signs=signs)
        for v in vs:
            try:
                rec = curvature_record(surface, float(u), float(v), s, tol_degenerate, tol_null, signs)
            except (DegenerateMetric, NullNormal):
                skipped += 1
                continue
            points.append(_Point(s, rec))
    if not points:
        raise EmptyGrid(f"all {nu * nv} grid points of {surface.name!r} are degenerate")

    by_case: dict[SurfaceCase, list[_Point]] = {}
    for case in SurfaceCase:
        pts = [p for p in points if p.rec.case is case]
        if pts:
            by_case[case] = pts

    formulas: list[FormulaAudit] = []
    undefined: list[str] = []
    for name in FORMULAS:
        for case, pts in by_case.items():
            fa, n_or, n_ref = _compare(name, case, pts, signs)
            if fa is not None:
                formulas.append(fa)
            if n_or or n_ref:
                undefined.append(
                    f"{name} {case.value}: skipped {n_or} samples with undefined oracle, "
                    f"{n_ref} with vanishing reference denominator"
                )
    return AuditReport(
        surface=surface.name,
        nu=nu,
        nv=nv,
        skipped=skipped,
        case_counts={c: len(p) for c, p in by_case.items()},
        formulas=formulas,
        notes=_notes(by_case, undefined, signs),
    )
