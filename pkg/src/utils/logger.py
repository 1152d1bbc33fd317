"""
Logging utility module for stabledrift.

All package loggers hang off the `stabledrift` logger; `setup_logging` is
called once by the CLI (or a script) and library code only calls
`get_logger(__name__)`.
"""

import logging
import logging.handlers
import os
from datetime import datetime
from typing import Dict, Optional

from config.settings import SystemConfig

ROOT_LOGGER = 'stabledrift'

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
FILE_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
CONSOLE_DATE_FORMAT = '%H:%M:%S'

LOG_FILE_MAX_BYTES = 10 * 1024 * 1024
LOG_FILE_BACKUPS = 5


class ColorizedFormatter(logging.Formatter):
    """Level names coloured with ANSI codes; the record is left untouched"""

    COLORS = {
        'DEBUG': '\033[36m',     # Cyan
        'INFO': '\033[32m',      # Green
        'WARNING': '\033[33m',   # Yellow
        'ERROR': '\033[31m',     # Red
        'CRITICAL': '\033[35m',  # Magenta
    }
    RESET = '\033[0m'

    def format(self, record: logging.LogRecord) -> str:
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


def _console_formatter() -> logging.Formatter:
    try:
        import colorama
    except ImportError:
        # Fallback to the plain formatter if colorama is not available
        return logging.Formatter(LOG_FORMAT, datefmt=CONSOLE_DATE_FORMAT)
    colorama.init()
    return ColorizedFormatter(LOG_FORMAT, datefmt=CONSOLE_DATE_FORMAT)


def _file_handler(log_file: str) -> logging.Handler:
    log_dir = os.path.dirname(log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file, maxBytes=LOG_FILE_MAX_BYTES, backupCount=LOG_FILE_BACKUPS
    )
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=FILE_DATE_FORMAT))
    return handler


def setup_logging(log_level: str = SystemConfig.LOG_LEVEL,
                  log_file: Optional[str] = SystemConfig.LOG_FILE,
                  console_output: bool = True) -> logging.Logger:
    """
    Configure the package logger.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_file: rotating log file (always at DEBUG), or None for console only
        console_output: also log to stderr at log_level

    Returns:
        The `stabledrift` logger
    """
    level = getattr(logging, log_level.upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"unknown log level {log_level!r}")

    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(logging.DEBUG if log_file else level)
    logger.handlers.clear()

    if log_file:
        logger.addHandler(_file_handler(log_file))

    if console_output:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(_console_formatter())
        logger.addHandler(console_handler)

    logger.debug(f"Logging initialized - Level: {log_level}, File: {log_file}")
    return logger


def get_logger(name: str) -> logging.Logger:
    """Module logger `stabledrift.<name>`, with a leading `src.` dropped"""
    if name.startswith('src.'):
        name = name[len('src.'):]
    return logging.getLogger(f'{ROOT_LOGGER}.{name}')


class PerformanceLogger:
    """Wall-clock timing of studies, kept per operation in milliseconds"""

    def __init__(self, logger: logging.Logger):
        self.logger = logger
        self.start_times: Dict[str, datetime] = {}
        self.durations_ms: Dict[str, float] = {}

    def start_timer(self, operation: str):
        self.start_times[operation] = datetime.now()
        self.logger.debug(f"Started timing: {operation}")

    def end_timer(self, operation: str, log_level: int = logging.INFO) -> Optional[float]:
        """Stop the timer, log and return the duration in ms"""
        if operation not in self.start_times:
            self.logger.warning(f"No start time found for operation: {operation}")
            return None

        duration_ms = (datetime.now() - self.start_times.pop(operation)).total_seconds() * 1000
        self.durations_ms[operation] = duration_ms
        self.logger.log(log_level, f"Operation '{operation}' took {duration_ms:.2f}ms")
        return duration_ms

    def time_operation(self, operation: str) -> "TimedOperation":
        return TimedOperation(self, operation)


class TimedOperation:
    """Context manager around start_timer / end_timer; failures log at ERROR"""

    def __init__(self, perf_logger: PerformanceLogger, operation: str):
        self.perf_logger = perf_logger
        self.operation = operation

    def __enter__(self):
        self.perf_logger.start_timer(self.operation)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.perf_logger.end_timer(self.operation, logging.INFO if exc_type is None else logging.ERROR)
        return False
