"""Exception hierarchy.

``SpecError`` covers bad input (malformed expressions, unbound parameters,
broken spec files) and maps to CLI exit code 1. ``GeometryError`` covers
well-formed input that is geometrically unusable at some sample (null
vectors, degenerate metric, non arc-length director) and maps to exit code 2.
"""


class MinkRuledError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1

    @property
    def code(self) -> str:
        return type(self).__name__


class SpecError(MinkRuledError):
    exit_code = 1


class GeometryError(MinkRuledError):
    exit_code = 2


class ParseError(SpecError):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"at position {position}: {message}")


class UnknownFunction(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(position, f"unknown function {name!r}")


class UnboundParameter(SpecError):
    pass


class EvalError(SpecError):
    """Domain error inside a function (ln of non-positive, division by zero, ...)."""


class NonFiniteVector(GeometryError):
    pass


class NullVector(GeometryError):
    pass


class NotUnitDirector(GeometryError):
    pass


class NotArcLength(GeometryError):
    pass


class CausalClassChange(GeometryError):
    pass


class NullDirectorDerivative(GeometryError):
    pass


class NullFrameVector(GeometryError):
    pass


class FrameResidual(GeometryError):
    pass


class NullRulingDerivative(GeometryError):
    pass


class StrictionResidual(GeometryError):
    pass


class DevelopableSurface(GeometryError):
    pass


class DegenerateMetric(GeometryError):
    pass


class NullNormal(GeometryError):
    pass


class NullTangent(GeometryError):
    pass


class PrintedDenominatorZero(GeometryError):
    pass


class EmptyGrid(GeometryError):
    pass
