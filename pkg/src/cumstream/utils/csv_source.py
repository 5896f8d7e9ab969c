# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Batch source reading a stream of samples from CSV."""

import csv
import itertools
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, TextIO

import numpy as np

from ..exceptions import ConfigurationError, DataFormatError, ShapeError

logger = logging.getLogger(__name__)


class CsvBatchSource:
    """Yield one t-row batch, then t_up-row batches, from a CSV file or stdin.

    Rows are samples and columns are variables. Blank lines are skipped. The
    last batch may be short when the input runs out; the stream engine
    decides what to do with it.
    """

    def __init__(self, path: str, n: int, t: int, t_up: int, header: bool = False):
        if t < 1 or t_up < 1:
            raise ConfigurationError(f"Batch lengths must be >= 1, got t={t}, t_up={t_up}")
        self.path = path
        self.n = n
        self.t = t
        self.t_up = t_up
        self.header = header
        self.rows_read = 0

    @contextmanager
    def _open(self) -> Iterator[TextIO]:
        if self.path == "-":
            logger.info("Reading samples from stdin")
            yield sys.stdin
            return
        if not Path(self.path).exists():
            raise FileNotFoundError(f"Input file not found: {self.path}")
        logger.info("Reading samples from file: %s", self.path)
        with open(self.path, "r", encoding="utf-8", newline="") as handle:
            yield handle

    def _parse(self, rows: List[List[str]], first_line: int) -> np.ndarray:
        for offset, row in enumerate(rows):
            if len(row) != self.n:
                line = first_line + offset
                if len(set(len(r) for r in rows)) > 1:
                    raise DataFormatError(f"Line {line}: ragged row with {len(row)} fields")
                raise ShapeError(f"Line {line}: {len(row)} columns, expected n={self.n}")
        try:
            return np.array(rows, dtype=np.float64)
        except ValueError:
            for offset, row in enumerate(rows):
                for field in row:
                    try:
                        float(field)
                    except ValueError:
                        raise DataFormatError(
                            f"Line {first_line + offset}: not a number: {field!r}"
                        )
            raise

    def __iter__(self) -> Iterator[np.ndarray]:
        with self._open() as handle:
            reader = csv.reader(handle)
            if self.header:
                next(reader, None)
            records = (row for row in reader if row)
            size = self.t
            line = 2 if self.header else 1
            while True:
                rows = list(itertools.islice(records, size))
                if not rows:
                    return
                batch = self._parse(rows, line)
                self.rows_read += len(rows)
                line += len(rows)
                yield batch
                if len(rows) < size:
                    return
                size = self.t_up
