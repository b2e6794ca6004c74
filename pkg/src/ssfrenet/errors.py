"""Exception hierarchy shared by all ssfrenet modules."""


class SSFrenetError(Exception):
    """Base class for every error raised by this package."""


class CurveSyntaxError(SSFrenetError, SyntaxError):
    """Malformed curve text. ``position`` is the 0-based character offset."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.source_text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownFunction(CurveSyntaxError):
    pass


class ArityError(CurveSyntaxError):
    pass


class DomainError(SSFrenetError, ValueError):
    """Evaluation outside the domain of a function, chart or curve."""


class NotUnitSpeed(SSFrenetError, ValueError):
    """The curve is not parametrized by arc length within tolerance."""

    def __init__(self, message, speeds=()):
        self.speeds = tuple(speeds)
        if self.speeds:
            message = f"{message} (measured speed min={min(self.speeds):.17g}, max={max(self.speeds):.17g})"
        super().__init__(message)


class ConstraintViolation(SSFrenetError, ValueError):
    pass


class StepError(SSFrenetError, ValueError):
    pass


class EmptyRange(SSFrenetError, ValueError):
    pass


class ParameterError(SSFrenetError, ValueError):
    pass


class RangeError(SSFrenetError, ValueError):
    pass
