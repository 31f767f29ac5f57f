"""Non-developable ruled surfaces in Minkowski 3-space.

Build ruled surfaces ``X(u, v) = sigma(u) + v b(u)`` from symbolic curves,
compute their structure functions and curvature invariants under the
(+, +, -) metric, and audit closed-form reference formulas against a
fundamental-forms oracle.
"""

from minkruled.errors import GeometryError, MinkRuledError, SpecError
from minkruled.lorentz import CausalClass, causal_class, cross, inner, norm, normalize

__all__ = [
    "CausalClass",
    "GeometryError",
    "MinkRuledError",
    "SpecError",
    "causal_class",
    "cross",
    "inner",
    "norm",
    "normalize",
]

__version__ = "0.1.0"
