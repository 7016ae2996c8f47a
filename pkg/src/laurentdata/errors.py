"""Exception hierarchy.

Every error carries a ``kind`` string used by the command line front end
when it reports failures as JSON.
"""


class LaurentDataError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def kind(self):
        return type(self).__name__


class BackendMismatch(LaurentDataError, TypeError):
    pass


class InsufficientPrecision(LaurentDataError):
    pass


class NonzeroResidue(LaurentDataError):
    pass


class OddValuation(LaurentDataError):
    pass


class NotASquare(LaurentDataError):
    pass


class DimensionMismatch(LaurentDataError):
    pass


class InvalidWindow(LaurentDataError):
    pass


class NotIsotropic(LaurentDataError):
    pass


class InvalidCurve(LaurentDataError):
    pass


class SingularCurve(InvalidCurve):
    pass


class OddDegreeRequired(InvalidCurve):
    pass


class WindowTooSmall(LaurentDataError):
    pass


class QuadratureFailure(LaurentDataError):
    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate


class IllConditioned(LaurentDataError):
    pass


class GenusUnsupported(LaurentDataError):
    pass


class NotSiegel(LaurentDataError):
    pass


class DegenerateFOne(LaurentDataError):
    pass


class SchemaError(LaurentDataError, ValueError):
    """Malformed JSON input."""
