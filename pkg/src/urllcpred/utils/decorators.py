"""
Decorator utilities.
"""

import functools
import time
from typing import Callable

from .logging_config import log


def timer(func: Callable) -> Callable:
    """
    Decorator that logs a function's wall-clock time at DEBUG level.

    Args:
        func: Function to time.

    Returns:
        Wrapped function.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - start
        log.debug(f"{func.__qualname__} took {elapsed:.2f} s")
        return result
    return wrapper
