# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Raw moment tensors of data batches and their sliding-window update.

Moments are never centred: an update changes the mean of the window, so
central moments of the old window cannot be corrected by the batches alone.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..exceptions import ShapeError
from ..tensors import SymTensor
from ..utils.workers import ordered_map, split_rows

logger = logging.getLogger(__name__)


@dataclass
class DataCostMeter:
    """Counts data rows read by moment computations."""

    rows_read: int = 0

    def record(self, rows: int) -> None:
        self.rows_read += rows


@dataclass
class MomentSeries:
    """Moment tensors of orders 1..d for one window of ``window_len`` rows."""

    tensors: List[SymTensor] = field(default_factory=list)
    window_len: int = 0

    def __post_init__(self):
        if not self.tensors:
            raise ShapeError("A moment series needs at least the first-order tensor")
        first = self.tensors[0]
        for order, tensor in enumerate(self.tensors, start=1):
            if tensor.order != order:
                raise ShapeError(f"Tensor at position {order} has order {tensor.order}")
            if (tensor.dim, tensor.block_size) != (first.dim, first.block_size):
                raise ShapeError("All tensors of a series must share dim and block_size")

    @property
    def max_order(self) -> int:
        return len(self.tensors)

    @property
    def dim(self) -> int:
        return self.tensors[0].dim

    @property
    def block_size(self) -> int:
        return self.tensors[0].block_size

    def __getitem__(self, order: int) -> SymTensor:
        """Tensor of the given order (1-based, as in M_1..M_d)."""
        return self.tensors[order - 1]

    def copy(self) -> "MomentSeries":
        return MomentSeries([tensor.copy() for tensor in self.tensors], self.window_len)


def as_batch(X, n: Optional[int] = None) -> np.ndarray:
    """Validate a data batch: 2-D float64, at least one row, ``n`` columns if given."""
    batch = np.asarray(X, dtype=np.float64)
    if batch.ndim != 2:
        raise ShapeError(f"Data batch must be a 2-D (rows x variables) array, got {batch.ndim}-D")
    if batch.shape[0] < 1:
        raise ShapeError("Data batch is empty")
    if n is not None and batch.shape[1] != n:
        raise ShapeError(f"Data batch has {batch.shape[1]} columns, expected {n}")
    return batch


def _fill_block_sums(X: np.ndarray, tensor: SymTensor) -> None:
    """Write sum_l prod_k x[l, i_k] into every stored block of ``tensor``.

    Row-wise Khatri-Rao products of the leading block columns are built once
    per prefix (j_1..j_{d-1}) and contracted with all trailing columns in a
    single matrix product.
    """
    order = tensor.order
    b = tensor.block_size
    columns = [X[:, tensor.block_slice(jk)] for jk in range(tensor.n_blocks)]
    rows = X.shape[0]

    def descend(prefix, product):
        start = prefix[-1] if prefix else 0
        if len(prefix) == order - 1:
            tail = X[:, start * b:]
            if product is None:
                sums = tail.sum(axis=0)[np.newaxis, :]
            else:
                sums = product.T @ tail
            head_shape = tensor.extents(prefix)
            offset = 0
            for jk in range(start, tensor.n_blocks):
                width = tensor.extent(jk)
                block = tensor.block(prefix + (jk,))
                block[...] = sums[:, offset:offset + width].reshape(head_shape + (width,))
                offset += width
            return
        for jk in range(start, tensor.n_blocks):
            if product is None:
                extended = columns[jk]
            else:
                extended = (product[:, :, np.newaxis]
                            * columns[jk][:, np.newaxis, :]).reshape(rows, -1)
            descend(prefix + (jk,), extended)

    descend((), None)


def moment_tensor(X, order: int, block_size: int) -> SymTensor:
    """Moment tensor of a batch: m_i = (1/s) sum_l prod_k x[l, i_k].

    Args:
        X: Batch of s rows (realizations) by n columns (variables)
        order: Tensor order
        block_size: Block edge of the storage

    Returns:
        The moment tensor in block storage
    """
    batch = as_batch(X)
    tensor = SymTensor(order, batch.shape[1], block_size)
    _fill_block_sums(batch, tensor)
    for _, block in tensor.blocks():
        block /= batch.shape[0]
    return tensor


def _single_series(X: np.ndarray, d: int, block_size: int) -> MomentSeries:
    tensors = [moment_tensor(X, order, block_size) for order in range(1, d + 1)]
    return MomentSeries(tensors, X.shape[0])


def moment_series(X, d: int, block_size: int, workers: int = 1,
                  meter: Optional[DataCostMeter] = None) -> MomentSeries:
    """Moment tensors of orders 1..d of a batch.

    With ``workers > 1`` the rows are split into contiguous chunks, each
    chunk's series is computed on a thread pool and the partial series are
    merged left to right with :func:`combine`.
    """
    batch = as_batch(X)
    if meter is not None:
        meter.record(batch.shape[0])

    chunks = split_rows(batch.shape[0], workers)
    partials = ordered_map(lambda rows: _single_series(batch[rows], d, block_size),
                           chunks, workers)
    series = partials[0]
    for partial in partials[1:]:
        series = combine(series, series.window_len, partial, partial.window_len)
    return series


def combine(M1: MomentSeries, s1: int, M2: MomentSeries, s2: int) -> MomentSeries:
    """Moments of the concatenation of two batches: (s1*M1 + s2*M2) / (s1 + s2)."""
    if (M1.max_order, M1.dim, M1.block_size) != (M2.max_order, M2.dim, M2.block_size):
        raise ShapeError(
            f"Cannot combine series of (d, n, b) = {(M1.max_order, M1.dim, M1.block_size)} "
            f"and {(M2.max_order, M2.dim, M2.block_size)}"
        )
    total = s1 + s2
    if total <= 0:
        raise ShapeError("Combined row count must be positive")
    tensors = [first.scale(s1 / total).axpy(second, s2 / total)
               for first, second in zip(M1.tensors, M2.tensors)]
    return MomentSeries(tensors, total)


def moments_update(M: MomentSeries, X_plus, X_minus, workers: int = 1,
                   meter: Optional[DataCostMeter] = None) -> MomentSeries:
    """Slide the window: M_s + (t_up / t) * (M_s(X_plus) - M_s(X_minus)) for every order.

    Args:
        M: Moments of the current window of ``M.window_len`` rows
        X_plus: Incoming batch of t_up rows
        X_minus: Outgoing batch (the oldest t_up rows of the window)
        workers: Worker count for the two batch moment computations
        meter: Optional row-read counter

    Returns:
        Moments of the shifted window
    """
    incoming = as_batch(X_plus, M.dim)
    outgoing = as_batch(X_minus, M.dim)
    t_up = incoming.shape[0]
    if outgoing.shape[0] != t_up:
        raise ShapeError(
            f"Incoming batch has {t_up} rows but outgoing batch has {outgoing.shape[0]}"
        )
    if t_up > M.window_len:
        raise ShapeError(f"Batch of {t_up} rows exceeds window length {M.window_len}")

    plus = moment_series(incoming, M.max_order, M.block_size, workers, meter)
    minus = moment_series(outgoing, M.max_order, M.block_size, workers, meter)
    factor = t_up / M.window_len
    tensors = [current.axpy(added.axpy(removed, -1.0), factor)
               for current, added, removed in zip(M.tensors, plus.tensors, minus.tensors)]
    return MomentSeries(tensors, M.window_len)
