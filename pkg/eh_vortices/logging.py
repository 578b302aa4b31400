"""Logging setup shared by the library and the command line."""

from __future__ import annotations

import logging
import sys
from collections.abc import Sequence
from pathlib import Path

_FORMAT = "%(levelname)s: %(message)s"
_FILE_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def format_point(point: Sequence[float], digits: int = 4) -> str:
    """Render a 3D point compactly for log lines."""
    return "(" + ", ".join(f"{float(c):.{digits}g}" for c in point) + ")"


def setup_logging(level: str = "INFO", log_file: Path | None = None) -> None:
    """Configure the root logger; optionally mirror records into a log file.

    Unknown level names fall back to INFO.
    """
    resolved = getattr(logging, level.upper(), logging.INFO)
    if not isinstance(resolved, int):
        resolved = logging.INFO

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stdout)]
    handlers[0].setFormatter(logging.Formatter(_FORMAT))
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(_FILE_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(level=resolved, handlers=handlers, force=True)


def get_logger(name: str) -> logging.Logger:
    """Return a module-level logger."""
    return logging.getLogger(name)
