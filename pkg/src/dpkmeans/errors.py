"""Exception types raised across the package."""


class KMeansError(Exception):
    """Base class for all dpkmeans errors."""


class DimensionMismatch(KMeansError, ValueError):
    pass


class IndexOutOfRange(KMeansError, IndexError):
    pass


class KExceedsN(KMeansError, ValueError):
    """Requested more clusters than there are records."""

    def __init__(self, k, n):
        super().__init__(f"k={k} exceeds the number of records n={n}")
        self.k = k
        self.n = n


class EmptyPartition(KMeansError, ValueError):
    pass


class InstanceTooLarge(KMeansError, ValueError):
    pass


class CSVFormatError(KMeansError, ValueError):
    """A CSV file could not be parsed into a numeric matrix."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}" + (f", column {column}" if column is not None else "") + f": {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class RaggedRows(CSVFormatError):
    pass


class NonNumericCell(CSVFormatError):
    pass


class MissingValue(CSVFormatError):
    pass


class DatasetShapeMismatch(KMeansError, ValueError):
    pass


class UnknownFormat(KMeansError, ValueError):
    pass


class EmptyReport(KMeansError, ValueError):
    pass


class IncomparableCells(KMeansError, ValueError):
    """Cells scored in different spaces were asked to be ranked together."""
