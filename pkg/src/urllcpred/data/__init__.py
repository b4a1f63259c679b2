"""Data validation and CSV import/export.

``urllcpred.data.loaders`` is imported explicitly by callers; it depends on
the core types, which in turn depend on the validators re-exported here.
"""

from .validators import (
    InvalidArgumentError,
    check_count,
    check_positive,
    check_probability,
    validate_series,
)

__all__ = [
    "InvalidArgumentError",
    "check_count",
    "check_positive",
    "check_probability",
    "validate_series",
]
