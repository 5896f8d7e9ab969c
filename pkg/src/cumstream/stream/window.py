# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Ring buffer holding the current t x n observation window."""

import numpy as np

from ..exceptions import ConfigurationError, ShapeError
from ..statistics import as_batch


class WindowBuffer:
    """Fixed-capacity ring of ``capacity`` rows over ``n`` variables.

    ``head`` points at the oldest row. Once primed the buffer always holds
    exactly ``capacity`` rows; :meth:`shift` swaps the oldest rows for new ones.
    """

    def __init__(self, capacity: int, n: int):
        if capacity < 1 or n < 1:
            raise ConfigurationError(
                f"Window needs at least one row and one column, got {capacity}x{n}"
            )
        self.capacity = capacity
        self.n = n
        self._rows = np.zeros((capacity, n))
        self.head = 0
        self.primed = False

    def prime(self, X) -> None:
        """Fill the buffer with exactly ``capacity`` rows."""
        batch = as_batch(X, self.n)
        if batch.shape[0] != self.capacity:
            raise ShapeError(
                f"Priming batch has {batch.shape[0]} rows, window length is {self.capacity}"
            )
        self._rows[...] = batch
        self.head = 0
        self.primed = True

    def _positions(self, count: int) -> np.ndarray:
        return (self.head + np.arange(count)) % self.capacity

    def peek_oldest(self, count: int) -> np.ndarray:
        """Copy of the ``count`` oldest rows in arrival order."""
        if not self.primed:
            raise ShapeError("Window buffer has not been primed")
        if count < 1 or count > self.capacity:
            raise ShapeError(f"Cannot take {count} rows from a window of {self.capacity}")
        return self._rows[self._positions(count)]

    def shift(self, X_plus) -> np.ndarray:
        """Drop the oldest rows, append ``X_plus`` and return the dropped rows.

        Args:
            X_plus: Incoming batch of t_up <= capacity rows

        Returns:
            The outgoing batch X_minus in arrival order
        """
        incoming = as_batch(X_plus, self.n)
        count = incoming.shape[0]
        outgoing = self.peek_oldest(count)
        positions = self._positions(count)
        self._rows[positions] = incoming
        self.head = (self.head + count) % self.capacity
        return outgoing

    def contents(self) -> np.ndarray:
        """Materialized window, oldest row first."""
        if not self.primed:
            raise ShapeError("Window buffer has not been primed")
        return np.roll(self._rows, -self.head, axis=0)

    def __len__(self) -> int:
        return self.capacity if self.primed else 0
