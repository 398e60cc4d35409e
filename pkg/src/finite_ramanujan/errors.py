"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """An argument is outside the domain of the operation."""


class TableRangeError(IndexError):
    """An index falls outside the extent of a table."""


class NumericOracleFailure(ArithmeticError):
    """A floating-point oracle breached its tolerance. Indicates a bug, not bad input."""


class SizeLimitError(ValueError):
    """A problem exceeds the size guard of a deliberately slow code path."""


class DegenerateFitError(ValueError):
    """Too few usable (nonzero) points for a log-log fit."""


class IngestionError(ValueError):
    """A custom-coefficient file failed validation."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
