"""Surface spec files and deterministic output formatting."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from minkruled.curve import ExprCurve
from minkruled.errors import ParseError, SpecError
from minkruled.expr import parse
from minkruled.ruled import RuledSurface

FIXTURES = (
    "helicoid",
    "bscroll",
    "oblique_helicoid",
    "desitter_circle",
    "helicoid_spacelike",
    "hyperbolic_sweep",
)


@dataclass(frozen=True)
class SurfaceSpec:
    name: str
    alpha: tuple[str, str, str]
    b: tuple[str, str, str]
    params: dict[str, float] = field(default_factory=dict)
    domain_u: tuple[float, float] = (0.0, 1.0)
    domain_v: tuple[float, float] = (-1.0, 1.0)

    @classmethod
    def from_dict(cls, data: Any) -> SurfaceSpec:
        if not isinstance(data, dict):
            raise SpecError("spec must be a JSON object")
        missing = {"name", "alpha", "b", "domain_u", "domain_v"} - set(data)
        if missing:
            raise SpecError(f"spec is missing key(s): {', '.join(sorted(missing))}")
        for key in ("alpha", "b"):
            value = data[key]
            if not (isinstance(value, list) and len(value) == 3 and all(isinstance(s, str) for s in value)):
                raise SpecError(f"{key!r} must be a list of three expression strings")
        params = data.get("params", {})
        if not isinstance(params, dict) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in params.values()
        ):
            raise SpecError("'params' must map names to numbers")
        domains = []
        for key in ("domain_u", "domain_v"):
            dom = data[key]
            if not (isinstance(dom, list) and len(dom) == 2 and all(isinstance(x, (int, float)) for x in dom)):
                raise SpecError(f"{key!r} must be [lo, hi]")
            lo, hi = float(dom[0]), float(dom[1])
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise SpecError(f"{key!r} must satisfy lo < hi")
            domains.append((lo, hi))
        return cls(
            name=str(data["name"]),
            alpha=tuple(data["alpha"]),
            b=tuple(data["b"]),
            params={str(k): float(v) for k, v in params.items()},
            domain_u=domains[0],
            domain_v=domains[1],
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "alpha": list(self.alpha),
            "b": list(self.b),
            "params": dict(self.params),
            "domain_u": list(self.domain_u),
            "domain_v": list(self.domain_v),
        }

    def build(self) -> RuledSurface:
        curves = []
        for key in ("alpha", "b"):
            comps = []
            for i, text in enumerate(getattr(self, key)):
                try:
                    comps.append(parse(text))
                except ParseError as exc:
                    raise ParseError(exc.position, f"in {key}[{i}] {text!r}: {exc.message}") from None
            curves.append(ExprCurve(tuple(comps), self.params))
        return RuledSurface(curves[0], curves[1], self.domain_u, self.domain_v, self.name)


def load_spec(source: str | Path) -> SurfaceSpec:
    """Load a spec from a JSON file, or a bundled fixture by name."""
    path = Path(source)
    if not path.exists() and str(source) in FIXTURES:
        text = resources.files("minkruled.fixtures").joinpath(f"{source}.json").read_text()
    else:
        try:
            text = path.read_text()
        except OSError as exc:
            raise SpecError(f"cannot read spec {str(source)!r}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON in {str(source)!r}: {exc}") from None
    return SurfaceSpec.from_dict(data)


def load_fixture(name: str) -> RuledSurface:
    return load_spec(name).build()


@dataclass(frozen=True)
class GridConfig:
    nu: int = 32
    nv: int = 32
    derivative_step: float = 1e-4
    tol_null: float = 1e-9
    tol_degenerate: float = 1e-10

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise SpecError("grid needs nu, nv >= 2")
        for name in ("derivative_step", "tol_null", "tol_degenerate"):
            if not getattr(self, name) > 0:
                raise SpecError(f"{name} must be positive")


# -- deterministic JSON ----------------------------------------------------


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x + 0.0, ".17g")  # + 0.0 drops the sign of -0.0


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "tolist"):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(x, indent, _level + 1)}" for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
