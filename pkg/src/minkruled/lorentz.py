"""Linear algebra of Minkowski 3-space with signature (+, +, -).

Vectors are plain numpy arrays whose last axis has length 3, so every
function here also works on stacks of vectors. ``vec`` builds a validated
single vector.
"""

from __future__ import annotations

import enum

import numpy as np

from minkruled.errors import NonFiniteVector, NullVector

#: Diagonal of the metric tensor.
SIGNATURE = np.array([1.0, 1.0, -1.0])


class CausalClass(enum.Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    NULL = "Null"

    def __str__(self) -> str:
        return self.value


def _finite(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (3,):
        raise ValueError(f"expected vectors of length 3, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteVector(f"non-finite component in {x!r}")
    return x


def vec(c1: float, c2: float, c3: float) -> np.ndarray:
    return _finite([c1, c2, c3])


def inner(x, y):
    """Lorentzian inner product ``x1*y1 + x2*y2 - x3*y3``."""
    x, y = _finite(x), _finite(y)
    return x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2]


def cross(x, y) -> np.ndarray:
    """Lorentzian vector product, defined by ``inner(cross(x, y), z) == det(x, y, z)``."""
    x, y = _finite(x), _finite(y)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    y1, y2, y3 = y[..., 0], y[..., 1], y[..., 2]
    return np.stack(
        [x2 * y3 - x3 * y2, x3 * y1 - x1 * y3, x2 * y1 - x1 * y2], axis=-1
    )


def causal_class(x, tol: float = 1e-9) -> CausalClass:
    """Classify a single vector.

    A vector is null when ``|<x,x>| <= tol * max(1, |x|_E^2)``; the zero
    vector counts as spacelike.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = _finite(x)
    if x.ndim != 1:
        raise ValueError("causal_class takes a single vector")
    if not np.any(x):
        return CausalClass.SPACELIKE
    q = float(inner(x, x))
    if abs(q) <= tol * max(1.0, float(np.dot(x, x))):
        return CausalClass.NULL
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


def norm(x):
    """Pseudo-norm ``sqrt(|<x,x>|)``."""
    return np.sqrt(np.abs(inner(x, x)))


def normalize(x, tol: float = 1e-9) -> np.ndarray:
    x = _finite(x)
    if not np.any(x) or causal_class(x, tol) is CausalClass.NULL:
        raise NullVector(f"cannot normalize null or zero vector {x.tolist()}")
    return x / norm(x)


def sign_of(x) -> int:
    """+1 for spacelike, -1 for timelike (the sign of ``<x,x>``)."""
    return 1 if float(inner(x, x)) > 0 else -1


def rotation3(angle: float) -> np.ndarray:
    """Rotation about the timelike third axis."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def boost13(rapidity: float) -> np.ndarray:
    """Boost in the plane of the first and third axes."""
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    return np.array([[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]])
