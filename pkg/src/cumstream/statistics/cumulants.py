# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Cumulant tensors from raw moment tensors via the set-partition recursion.

For every order s, c_i = m_i - A_i where A_i sums, over all partitions of
the s positions into at least two parts, the product of lower-order
cumulant elements indexed by the sub-multi-index of each part.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import MultiIndexError, ShapeError
from ..tensors import MultiIndex, SymTensor
from ..utils.workers import ordered_map
from .moments import DataCostMeter, MomentSeries, moment_series
from .partitions import SetPartition, partitions

logger = logging.getLogger(__name__)


@dataclass
class CumulantSeries:
    """Cumulant tensors C_1..C_d of one window."""

    tensors: List[SymTensor] = field(default_factory=list)

    def __post_init__(self):
        if not self.tensors:
            raise ShapeError("A cumulant series needs at least the first-order tensor")
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

    def __getitem__(self, order: int) -> SymTensor:
        """Tensor of the given order (1-based, as in C_1..C_d)."""
        return self.tensors[order - 1]


@lru_cache(maxsize=None)
def _outer_partitions(s: int) -> Tuple[SetPartition, ...]:
    """Partitions of {0..s-1} with at least two parts, enumerated once per order."""
    return tuple(partition for sigma in range(2, s + 1) for partition in partitions(s, sigma))


def sym_outer_element(i: Sequence[int], s: int, lower: Sequence[SymTensor]) -> float:
    """Element A_i of the symmetrized outer product of lower-order cumulants.

    Args:
        i: Multi-index of length s
        s: Order of the cumulant being computed
        lower: Cumulant tensors C_1..C_{s-1} (at least s - 1 of them)

    Returns:
        Sum over partitions with >= 2 parts of the product of c_{i(k)}
    """
    if len(i) != s:
        raise MultiIndexError(f"Multi-index {tuple(i)} has length {len(i)}, expected {s}")
    if len(lower) < s - 1:
        raise ShapeError(f"Order {s} needs cumulants of orders 1..{s - 1}, got {len(lower)}")
    total = 0.0
    for partition in _outer_partitions(s):
        term = 1.0
        for part in partition:
            term *= lower[len(part) - 1].get(tuple(i[p] for p in part))
        total += term
    return total


def _outer_block(j: MultiIndex, target: SymTensor, lower: Sequence[SymTensor]) -> np.ndarray:
    """Block j of the symmetrized outer product, built by broadcasting lower-order blocks.

    The sub-index of a sorted block index stays sorted, so every factor is a
    stored block whose modes already follow the positions of its part.
    """
    s = target.order
    extents = target.extents(j)
    accumulated = np.zeros(extents)
    for partition in _outer_partitions(s):
        term = None
        for part in partition:
            source = lower[len(part) - 1].block(tuple(j[p] for p in part))
            shape = [1] * s
            for p in part:
                shape[p] = extents[p]
            factor = source.reshape(shape)
            term = factor if term is None else term * factor
        accumulated += term
    return accumulated


def moms2cums(M: MomentSeries, workers: int = 1) -> CumulantSeries:
    """Convert moments M_1..M_d to cumulants C_1..C_d.

    Orders are processed in sequence; within one order the stored blocks are
    independent and may be evaluated on ``workers`` threads.
    """
    cumulants = [M[1].copy()]
    for s in range(2, M.max_order + 1):
        target = M[s].copy()

        def subtract(item, target=target):
            j, block = item
            block -= _outer_block(j, target, cumulants)

        ordered_map(subtract, list(target.blocks()), workers)
        cumulants.append(target)
    return CumulantSeries(cumulants)


def cumulant_series(X, d: int, b: int, workers: int = 1,
                    meter: Optional[DataCostMeter] = None) -> CumulantSeries:
    """Cumulants of a batch recomputed from scratch (the recalculation baseline)."""
    return moms2cums(moment_series(X, d, b, workers, meter), workers)
