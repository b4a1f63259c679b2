"""
Argument and series validation.

Every precondition violation in the package surfaces as an
``InvalidArgumentError`` naming the offending argument.
"""

from typing import Iterable, Optional

import numpy as np


class InvalidArgumentError(ValueError):
    """Raised when an argument violates an operation's precondition."""
    pass


def check_positive(name: str, value: float) -> float:
    """Require a finite, strictly positive number."""
    if not np.isfinite(value) or value <= 0:
        raise InvalidArgumentError(f"{name} must be finite and > 0, got {value!r}")
    return value


def check_non_negative(name: str, value: float) -> float:
    """Require a finite number >= 0."""
    if not np.isfinite(value) or value < 0:
        raise InvalidArgumentError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def check_count(name: str, value: int, minimum: int = 1) -> int:
    """Require an integer >= minimum."""
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise InvalidArgumentError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_probability(name: str, value: float) -> float:
    """Require 0 < value < 1."""
    if not np.isfinite(value) or not 0.0 < value < 1.0:
        raise InvalidArgumentError(f"{name} must lie in (0, 1), got {value!r}")
    return value


def validate_series(
    series: Iterable[float],
    name: str = "series",
    min_length: int = 1,
    non_negative: bool = False,
) -> np.ndarray:
    """
    Convert a series to a 1-D float array and validate it.

    Args:
        series: Values to validate.
        name: Name used in error messages.
        min_length: Minimum accepted length.
        non_negative: Whether negative entries are rejected.

    Returns:
        The series as a contiguous float64 array.

    Raises:
        InvalidArgumentError: If the series is not 1-D, too short, contains
            non-finite values, or has negative entries when forbidden.
    """
    values = np.ascontiguousarray(series, dtype=float)
    if values.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional, got shape {values.shape}")
    if values.size < min_length:
        raise InvalidArgumentError(
            f"{name} needs at least {min_length} samples, got {values.size}"
        )
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    if non_negative and np.any(values < 0):
        raise InvalidArgumentError(f"{name} contains negative values")
    return values


def check_same_length(a: np.ndarray, b: np.ndarray, names: Optional[tuple] = None) -> None:
    """Require two vectors of equal length."""
    if len(a) != len(b):
        left, right = names or ("first", "second")
        raise InvalidArgumentError(
            f"length mismatch: {left} has {len(a)} samples, {right} has {len(b)}"
        )
