"""Exception types shared across the package."""


class ConfrankError(Exception):
    """Base class for all confrank-specific errors."""


class DatasetError(ConfrankError):
    """Base class for errors raised while loading or validating a table."""


class SchemaError(DatasetError):
    """The CSV header is missing or does not match the declared columns."""


class ParseError(DatasetError):
    """A cell could not be parsed as a number."""

    def __init__(self, message: str, row: int, column: str):
        super().__init__(message)
        self.row = row
        self.column = column


class DuplicateRowError(DatasetError):
    """Two rows carry identical feature vectors."""


class NonFiniteValueError(DatasetError):
    """A performance or feature value is NaN or infinite."""


class UndefinedCorrelationError(ConfrankError, ValueError):
    """Correlation is undefined because one side has zero variance."""


class FamilyDomainError(ConfrankError, ValueError):
    """The observations violate a curve family's transform domain."""

    def __init__(self, family: str, message: str):
        super().__init__(f"{family}: {message}")
        self.family = family


class NoFitError(ConfrankError, ValueError):
    """No curve family could be fitted to the observations."""


class UnsupportedFeatureError(ConfrankError, ValueError):
    """The sampler cannot handle the table's feature encoding."""


class GenerationError(ConfrankError):
    """Synthetic table generation could not satisfy its invariants."""
