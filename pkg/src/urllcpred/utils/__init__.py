"""Utility modules."""

from .file_helpers import ensure_dir, sha256_file, sha256_json, write_text_lf
from .decorators import timer
from .logging_config import setup_logging, get_logger, log
from .rng import make_generator, child_stream

__all__ = [
    "ensure_dir",
    "sha256_file",
    "sha256_json",
    "write_text_lf",
    "timer",
    "setup_logging",
    "get_logger",
    "log",
    "make_generator",
    "child_stream",
]
