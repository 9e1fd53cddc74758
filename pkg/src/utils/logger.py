"""
Logging Configuration

Logs to a rotating main file, a rotating error file and the console.
The level can be overridden with CMC_LOG_LEVEL (also read from a .env file).
"""

import logging
import os
import sys
from pathlib import Path
from logging.handlers import RotatingFileHandler
from typing import Optional

from dotenv import load_dotenv

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
LOG_NAME = "cmc_boundary"


def resolve_log_level(configured: str = "INFO") -> str:
    """Return the effective log level name.

    The CMC_LOG_LEVEL environment variable wins over the configured value.
    A .env file in the working directory is honoured.

    Args:
        configured: Level from config/system_config.json

    Returns:
        Upper-case level name known to the logging module
    """
    load_dotenv()
    level = os.getenv("CMC_LOG_LEVEL", configured).upper()
    if not isinstance(getattr(logging, level, None), int):
        return configured.upper()
    return level


def _rotating(path: Path, level: int, formatter: logging.Formatter,
              max_bytes: int, backup_count: int) -> RotatingFileHandler:
    handler = RotatingFileHandler(filename=str(path), maxBytes=max_bytes, backupCount=backup_count)
    handler.setFormatter(formatter)
    handler.setLevel(level)
    return handler


def setup_logging(
    log_dir: str = "logs",
    log_level: str = "INFO",
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 5,
    console: Optional[bool] = True,
):
    """Configure logging for the cmc-boundary tools.

    The main file always records DEBUG; ``log_level`` only applies to the console.

    Args:
        log_dir: Directory for cmc_boundary.log and cmc_boundary-error.log
        log_level: DEBUG, INFO, WARNING or ERROR
        max_bytes: Size at which a log file rotates
        backup_count: Rotated files kept per log
        console: Also log to stdout

    Example:
        >>> setup_logging(log_level="DEBUG")
        >>> logging.getLogger(__name__).info("Suite started")
    """
    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    level = resolve_log_level(log_level)
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(logging.DEBUG)
    root.addHandler(_rotating(directory / f"{LOG_NAME}.log", logging.DEBUG,
                              formatter, max_bytes, backup_count))
    root.addHandler(_rotating(directory / f"{LOG_NAME}-error.log", logging.ERROR,
                              formatter, max_bytes, backup_count))

    if console:
        stream = logging.StreamHandler(sys.stdout)
        stream.setFormatter(formatter)
        stream.setLevel(getattr(logging, level))
        root.addHandler(stream)

    logging.debug("=" * 60)
    logging.debug(f"Logging initialized: level={level}, dir={log_dir}")
    logging.debug("=" * 60)


def get_logger(name: str) -> logging.Logger:
    """Module logger; handlers come from the root configured by setup_logging."""
    return logging.getLogger(name)
