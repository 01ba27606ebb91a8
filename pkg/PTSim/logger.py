"""
Logging setup for PTSim (loguru).

stdout belongs to the JSON and CSV the CLI emits, so every handler installed
here writes to stderr or to files. The CLI routes numpy floating-point
errors (overflow, invalid, divide) into the same log with
``route_numpy_errors``; importing this module leaves numpy's error state alone.
"""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np
from loguru import logger

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}"

logger.remove()


def error_log_path(log_file: str | Path) -> Path:
    """``logs/ptsim_{time}.log`` -> ``logs/errors_{time}.log``."""
    path = Path(log_file)
    _, _, tail = path.name.partition("_")
    return path.parent / f"errors_{tail or path.name}"


def _numpy_float_error(kind: str, flag: int) -> None:
    logger.opt(depth=2).warning(f"numpy floating-point error: {kind} (flag={flag})")


@contextmanager
def route_numpy_errors() -> Iterator[None]:
    """Report numpy overflow/invalid/divide events through loguru while the block runs."""
    with np.errstate(call=_numpy_float_error, over="call", invalid="call", divide="call"):
        yield


def configure_logger(
    console_level: str = "WARNING",
    log_file: str | None = None,
    log_level: str = "DEBUG",
    rotation: str = "100 MB",
    retention: str = "7 days",
    compression: str = "zip",
    console: TextIO | None = None,
) -> None:
    """
    (Re)install the console handler and, optionally, rotating file handlers.

    Args:
        console_level: Level for the console handler (DEBUG ... CRITICAL)
        log_file: File log path, e.g. "logs/ptsim_{time:YYYY-MM-DD}.log";
            None keeps logging on the console only. ERROR records also go to
            an ``errors_*`` file next to it.
        log_level: Level for the file handler
        rotation: Rotation policy of the file handler (e.g., "100 MB", "1 day")
        retention: Retention policy of the file handler (e.g., "7 days")
        compression: Compression of rotated files (e.g., "zip", "gz")
        console: Console stream; defaults to the current ``sys.stderr``
    """
    logger.remove()
    logger.add(console or sys.stderr, format=CONSOLE_FORMAT, level=console_level, colorize=True)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            rotation=rotation,
            retention=retention,
            compression=compression,
            level=log_level,
            format=FILE_FORMAT,
            encoding="utf-8",
        )
        logger.add(
            str(error_log_path(log_file)),
            rotation="50 MB",
            retention="30 days",
            compression=compression,
            level="ERROR",
            format=FILE_FORMAT,
            backtrace=True,
            diagnose=True,
            encoding="utf-8",
        )


configure_logger()

__all__ = ["logger", "configure_logger", "error_log_path", "route_numpy_errors"]
