# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Utility modules for cumstream."""

from .csv_source import CsvBatchSource
from .dump import load_series, save_series
from .workers import WORKERS_ENV, ordered_map, resolve_workers, split_rows

__all__ = [
    "WORKERS_ENV",
    "CsvBatchSource",
    "load_series",
    "ordered_map",
    "resolve_workers",
    "save_series",
    "split_rows",
]
