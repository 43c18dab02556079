"""Find near-optimal configurations from few performance measurements.

The library samples configurations one at a time, trains a regression
tree on what has been measured so far, and stops when the model looks
good enough for its job: predicting performance accurately, or merely
ranking configurations in roughly the right order.
"""

from confrank.errors import (
    ConfrankError,
    DatasetError,
    DuplicateRowError,
    FamilyDomainError,
    GenerationError,
    NoFitError,
    NonFiniteValueError,
    ParseError,
    SchemaError,
    UndefinedCorrelationError,
    UnsupportedFeatureError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfrankError",
    "DatasetError",
    "DuplicateRowError",
    "FamilyDomainError",
    "GenerationError",
    "NoFitError",
    "NonFiniteValueError",
    "ParseError",
    "SchemaError",
    "UndefinedCorrelationError",
    "UnsupportedFeatureError",
    "__version__",
]
