"""
Logging configuration using loguru.

One sink on stderr for interactive runs, plus an optional rotating file
sink for long Monte-Carlo sweeps.
"""

import sys
from pathlib import Path
from typing import Optional

from loguru import logger

DEFAULT_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)


def setup_logging(
    log_file: Optional[Path] = None,
    level: str = "INFO",
    format_string: Optional[str] = None,
    colorize: bool = True,
) -> None:
    """
    Configure loguru for the simulator.

    Args:
        log_file: Optional path to a log file.
        level: Log level (DEBUG, INFO, WARNING, ERROR).
        format_string: Custom format string.
        colorize: Whether the stderr sink uses ANSI colours.
    """
    logger.remove()

    if format_string is None:
        format_string = DEFAULT_FORMAT

    logger.add(
        sys.stderr,
        format=format_string,
        level=level.upper(),
        colorize=colorize,
    )

    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)

        # seeds may log from worker processes
        logger.add(
            log_file,
            format=format_string,
            level=level.upper(),
            rotation="10 MB",
            retention="7 days",
            compression="zip",
            enqueue=True,
        )

    logger.debug(f"Logging initialized at {level.upper()} level")


def get_logger(name: Optional[str] = None):
    """
    Get a logger instance, optionally bound to a component name.

    Args:
        name: Optional name bound into the record's ``extra``.

    Returns:
        Logger instance.
    """
    if name:
        return logger.bind(name=name)
    return logger


log = get_logger()
