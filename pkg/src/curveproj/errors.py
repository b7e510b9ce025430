"""Exception types shared across the package.

Negative outcomes of the detection pipeline (no fit, skew lines, rejected
candidates) are exceptions too, so callers can branch on the class name.
"""


class CurveprojError(Exception):
    """Base class; ``kind`` is the name used in machine-readable reports."""

    @property
    def kind(self) -> str:
        return type(self).__name__


# ratfun
class ZeroPolynomial(CurveprojError):
    pass


class NoFit(CurveprojError):
    pass


class DuplicateAbscissa(CurveprojError):
    pass


# parser
class ParseError(CurveprojError):
    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


# alias matching the grammar docs; never shadows the builtin inside this package
ExprSyntaxError = ParseError


class UnknownSymbol(ParseError):
    pass


class DivisionByZeroPolynomial(ParseError):
    pass


class MissingField(CurveprojError):
    def __init__(self, field):
        self.field = field
        super().__init__(f"missing field {field!r}")


# curves
class DegenerateCurve(CurveprojError):
    pass


class NotPlanar(CurveprojError):
    pass


class ImproperParametrization(CurveprojError):
    pass


# geometry
class EyeOnPlane(CurveprojError):
    pass


class BadRank(CurveprojError):
    pass


class CollapsesToPoint(CurveprojError):
    pass


class IdenticalPoints(CurveprojError):
    pass


class NearParallel(CurveprojError):
    pass


# detect
class CoplanarCurves(CurveprojError):
    pass


class LineInput(CurveprojError):
    pass


class NoCommonEye(CurveprojError):
    """Witness lines do not meet (skew) or coincide."""

    def __init__(self, message, reason="Skew"):
        self.reason = reason
        super().__init__(message)


class Rejected(CurveprojError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


# numeric
class IncompatibleStrip(CurveprojError):
    pass


class PlaneMismatch(CurveprojError):
    pass
