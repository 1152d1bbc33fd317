"""Versioned CSV output: one header comment line, then the DataFrame."""

import os

import pandas as pd

from config.settings import SystemConfig
from src.utils.errors import DomainError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def write_csv(frame: pd.DataFrame, path: str) -> str:
    """Write the header line and the frame; returns the path"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(SystemConfig.CSV_HEADER + '\n')
        frame.to_csv(handle, index=False, lineterminator='\n')
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def read_csv(path: str) -> pd.DataFrame:
    """Read a file written by write_csv, checking the version line"""
    with open(path, encoding='utf-8') as handle:
        first = handle.readline().rstrip('\n')
        if first != SystemConfig.CSV_HEADER:
            raise DomainError(f"{path} does not start with '{SystemConfig.CSV_HEADER}', got {first!r}")
        return pd.read_csv(handle)
