"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line frontend can map
failures without a lookup table: 2 for bad data, 3 for numeric degeneracy.
"""


class SpectralError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class DataValidityError(SpectralError, ValueError):
    """Input values are not usable (non-finite entries, empty arrays, ...)."""


class ShapeError(SpectralError, ValueError):
    """Array dimensions are incompatible with each other."""


class EmptyInputError(SpectralError, ValueError):
    """An operation received an empty collection."""


class FrequencyIndexError(SpectralError, IndexError):
    """A frequency index lies outside ``[0, n - 1]``."""


class UnsupportedLengthError(SpectralError, ValueError):
    """The default band scheme is not defined for this sequence length."""


class BandSpecError(SpectralError, ValueError):
    """A band specification string could not be parsed."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class UnknownBandError(SpectralError, LookupError):
    """A band name is not part of the scheme."""

    def __str__(self):
        # LookupError would otherwise repr() the message
        return str(self.args[0]) if self.args else ""


class DegenerateVectorError(SpectralError, ArithmeticError):
    """A vector with (numerically) zero norm was used as a cosine operand."""

    exit_code = 3


class DegenerateDirectionError(DegenerateVectorError):
    """Image or text difference vector vanishes in the directional loss."""


class FormatError(DataValidityError):
    """Malformed file contents."""


class BadMagicError(FormatError):
    pass


class TruncatedPayloadError(FormatError):
    pass


class EmptyDimensionError(FormatError):
    pass


class NonFiniteValueError(FormatError):
    pass


class SchemaError(FormatError):
    """JSON document violates the expected schema.

    ``path`` is a JSON-path style locator such as ``$.data[3]``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
