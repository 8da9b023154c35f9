"""Exception hierarchy shared by all modules."""


class PentagonError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrix(PentagonError):
    pass


class NotSymmetric(PentagonError):
    pass


class DegenerateParameters(PentagonError):
    pass


class DegenerateGram(PentagonError):
    pass


class DegenerateDelta(PentagonError):
    pass


class GeneratorMismatch(PentagonError):
    pass


class NotNilpotentSafe(PentagonError):
    pass


class NotGaussianGeneric(PentagonError):
    pass


class InconsistentRatio(PentagonError):
    """Coefficients of the two pentagon sides are not proportional.

    ``deviation`` carries the measured max relative deviation and ``const``
    the ratio that was tried.
    """

    def __init__(self, message, deviation=None, const=None):
        super().__init__(message)
        self.deviation = deviation
        self.const = const


class ZeroSide(PentagonError):
    pass


class ConfigError(PentagonError):
    pass


class ParseError(PentagonError):
    """Malformed zeta-family file; the message names the offending field."""

    def __init__(self, message, field=None, line=None):
        loc = []
        if field is not None:
            loc.append(f"field {field!r}")
        if line is not None:
            loc.append(f"line {line}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.field = field
        self.line = line
