"""Exception hierarchy shared by every module."""


class MarginKernelError(Exception):
    """Base class for all library errors."""


class DataError(MarginKernelError):
    """Problems with input data (bad files, bad labels, degenerate samples)."""


class RaggedRows(DataError):
    def __init__(self, row, expected, got):
        self.row = row
        super().__init__(f"row {row}: expected {expected} columns, got {got}")


class InvalidLabel(DataError):
    def __init__(self, row, label):
        self.row = row
        super().__init__(f"row {row}: label {label!r} is not one of +1, -1")


class NotOnSphere(DataError):
    pass


class EmptyDataset(DataError):
    pass


class DegenerateData(DataError):
    pass


class GeometryMismatch(DataError):
    pass


class DimensionMismatch(MarginKernelError, ValueError):
    pass


class UnsupportedDimension(MarginKernelError, ValueError):
    pass


class DomainError(MarginKernelError, ValueError):
    pass


class EmptyMeasure(MarginKernelError, ValueError):
    pass


class ZeroWeights(MarginKernelError, ValueError):
    pass


class ConfigError(MarginKernelError):
    """Malformed or unknown configuration keys."""
