"""Exception hierarchy shared by every solitons module."""


class SolitonLabError(Exception):
    """Base class for all errors raised by the laboratory."""


class EvaluationError(SolitonLabError):
    """Numerical evaluation failed; carries the offending operation and point."""

    def __init__(self, message, operation=None, point=None):
        super().__init__(message)
        self.operation = operation
        self.point = None if point is None else tuple(float(v) for v in point)

    def with_point(self, point):
        if self.point is None:
            self.point = tuple(float(v) for v in point)
        return self

    def __str__(self):
        text = super().__str__()
        if self.point is not None:
            text = f'{text} at point {self.point}'
        return text


class JetDomainError(EvaluationError):
    pass


class SingularMetricError(EvaluationError):
    pass


class UnboundNameError(EvaluationError):
    pass


class QuadratureError(EvaluationError):
    pass


class PotentialReconstructionError(EvaluationError):
    pass


class ExprSyntaxError(SolitonLabError):
    """Parse failure at a 1-based character offset."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f'{message} at offset {offset}'
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnknownFunctionError(ExprSyntaxError):
    pass


class ConfigError(SolitonLabError):
    pass


class CatalogError(SolitonLabError):
    pass


class DegenerateGridError(SolitonLabError):
    pass


class AsymmetricMatrixError(SolitonLabError):
    pass
