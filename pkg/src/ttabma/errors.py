"""Exception types shared across the package.

The CLI maps these onto exit codes: degenerate-data errors
(:class:`SingleClassError`, :class:`NonFiniteError`) exit with 3, every
other package error (malformed files, bad dimensions, out-of-range
values) exits with 2.
"""


class TtabmaError(Exception):
    """Base class for all errors raised by this package."""


class SingleClassError(TtabmaError, ValueError):
    """All labels belong to one class, so a logistic fit is undefined."""


class NonFiniteError(TtabmaError, ArithmeticError):
    """A fit produced non-finite values or a singular system despite the ridge."""


class DimensionMismatchError(TtabmaError, ValueError):
    """Shapes of related inputs disagree."""


class LengthMismatchError(DimensionMismatchError):
    """Paired sequences have different lengths."""


class TooManyColumnsError(TtabmaError, ValueError):
    """Table has more prediction columns than the configured cap."""


class EmptyRowError(TtabmaError, ValueError):
    """A prediction vector with no entries cannot be aggregated."""


class EmptyInputError(TtabmaError, ValueError):
    """An aggregate of zero values is undefined."""


class OutOfRangeError(TtabmaError, ValueError):
    """A prediction value is outside [0, 1] or non-finite.

    ``line`` and ``column`` locate the first offender when the value came
    from a CSV file (1-based line numbers counting the header as line 1).
    """

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class CsvFormatError(TtabmaError, ValueError):
    """Structural problem in a prediction-table CSV file."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class MissingHeaderError(CsvFormatError):
    """First line is not the expected ``label,pred_0,...`` header."""


class RaggedRowError(CsvFormatError):
    """A data row has the wrong number of fields."""


class NonBinaryLabelError(CsvFormatError):
    """A label field is not 0 or 1."""


class NonNumericFieldError(CsvFormatError):
    """A prediction field does not parse as a number."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message, line=line)
        self.column = column


class EmptyTableError(CsvFormatError):
    """The file carries a header but no data rows."""


class SplitError(TtabmaError, ValueError):
    """A calibration/evaluation split leaves one side empty."""
