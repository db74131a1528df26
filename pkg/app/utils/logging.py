"""Logging setup shared by the CLI and library callers."""
import logging
import os
from typing import Optional

from app.config import LOG_ENV_VAR

LOG_FORMAT = "%(levelname)s - %(message)s"


def resolve_level(verbose: bool = False, level: Optional[str] = None) -> int:
    """Pick the log level: explicit argument, then --verbose, then BRIDGERANK_LOG"""
    if level:
        name = level
    elif verbose:
        name = "INFO"
    else:
        name = os.getenv(LOG_ENV_VAR, "WARNING")

    resolved = logging.getLevelName(name.strip().upper())
    if not isinstance(resolved, int):
        return logging.WARNING
    return resolved


def setup_logging(verbose: bool = False, level: Optional[str] = None) -> None:
    """Configure root logging on stderr"""
    logging.basicConfig(level=resolve_level(verbose, level), format=LOG_FORMAT, force=True)
