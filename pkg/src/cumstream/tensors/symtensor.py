# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Block-structured storage for super-symmetric tensors.

Only blocks whose block multi-index is non-decreasing are stored, i.e. one
hyper-pyramidal part of the tensor. Each stored block keeps its full dense
content, including the entries repeated under its internal symmetry, so that
per-block reductions (norms, moment sums) need no per-element bookkeeping.

Indices are 0-based: element ``i`` lives in block ``i // block_size`` at
offset ``i % block_size``. When ``block_size`` does not divide ``dim`` the
last block along every mode is truncated, never padded.
"""

import itertools
import math
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ConfigurationError, MultiIndexError, ShapeError

MultiIndex = Tuple[int, ...]


def canonicalize(index: Sequence[int]) -> MultiIndex:
    """Return the non-decreasing form of a multi-index."""
    return tuple(sorted(int(i) for i in index))


def block_multiplicity(j: Sequence[int]) -> int:
    """Number of times a stored block recurs in the full tensor.

    Args:
        j: Non-decreasing block multi-index

    Returns:
        d! / prod(r_l!) where r_l are the run lengths of equal entries in j
    """
    j = tuple(j)
    if any(a > b for a, b in zip(j, j[1:])):
        raise MultiIndexError(f"Block index {j} is not non-decreasing")
    denominator = 1
    for _, run in itertools.groupby(j):
        denominator *= math.factorial(len(list(run)))
    return math.factorial(len(j)) // denominator


def block_rank(j: Sequence[int], n_blocks: int) -> int:
    """Position of ``j`` in the multiset-lexicographic order of sorted block indices."""
    order = len(j)
    rank = 0
    low = 0
    for k, jk in enumerate(j):
        remaining = order - k - 1
        for v in range(low, jk):
            rank += math.comb(n_blocks - v + remaining - 1, remaining)
        low = jk
    return rank


class SymTensor:
    """Super-symmetric tensor of order ``order`` over ``dim`` variables."""

    def __init__(self, order: int, dim: int, block_size: int,
                 blocks: Optional[List[np.ndarray]] = None):
        """Allocate a tensor, zero-filled unless ``blocks`` is given.

        Args:
            order: Number of modes d
            dim: Size n of every mode
            block_size: Block edge b, 1 <= b <= n
            blocks: Optional block contents in multiset-lexicographic order
        """
        if order < 1:
            raise ConfigurationError(f"Tensor order must be >= 1, got {order}")
        if dim < 1:
            raise ConfigurationError(f"Tensor dimension must be >= 1, got {dim}")
        if block_size < 1 or block_size > dim:
            raise ConfigurationError(
                f"Block size must be in 1..{dim}, got {block_size}"
            )

        self.order = order
        self.dim = dim
        self.block_size = block_size
        self.n_blocks = -(-dim // block_size)
        self._indices: List[MultiIndex] = list(
            itertools.combinations_with_replacement(range(self.n_blocks), order)
        )
        self._multiplicities = [block_multiplicity(j) for j in self._indices]

        if blocks is None:
            blocks = [np.zeros(self.extents(j)) for j in self._indices]
        elif len(blocks) != len(self._indices):
            raise ShapeError(
                f"Expected {len(self._indices)} blocks, got {len(blocks)}"
            )
        else:
            for j, block in zip(self._indices, blocks):
                if block.shape != self.extents(j):
                    raise ShapeError(
                        f"Block {j} has shape {block.shape}, expected {self.extents(j)}"
                    )
        self._blocks = blocks

    @classmethod
    def zeros(cls, order: int, dim: int, block_size: int) -> "SymTensor":
        """Create a zero tensor with all stored blocks allocated."""
        return cls(order, dim, block_size)

    @classmethod
    def from_dense(cls, array: np.ndarray, block_size: int) -> "SymTensor":
        """Build a tensor from a dense super-symmetric array.

        Only the stored pyramid is read; symmetry of ``array`` is assumed.
        """
        array = np.asarray(array, dtype=np.float64)
        order = array.ndim
        dim = array.shape[0] if order else 0
        if order < 1 or any(extent != dim for extent in array.shape):
            raise ShapeError(f"Dense array must be hyper-cubic, got shape {array.shape}")
        tensor = cls(order, dim, block_size)
        for rank, j in enumerate(tensor._indices):
            tensor._blocks[rank] = array[tensor._slices(j)].copy()
        return tensor

    def __repr__(self) -> str:
        return (f"SymTensor(order={self.order}, dim={self.dim}, "
                f"block_size={self.block_size}, blocks={len(self._blocks)})")

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.order, self.dim, self.block_size

    @property
    def block_indices(self) -> List[MultiIndex]:
        return list(self._indices)

    @property
    def stored_elements(self) -> int:
        return sum(block.size for block in self._blocks)

    def extent(self, jk: int) -> int:
        """Length of block coordinate ``jk`` along one mode."""
        return min(self.block_size, self.dim - jk * self.block_size)

    def extents(self, j: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self.extent(jk) for jk in j)

    def block_slice(self, jk: int) -> slice:
        start = jk * self.block_size
        return slice(start, start + self.extent(jk))

    def _slices(self, j: Sequence[int]) -> Tuple[slice, ...]:
        return tuple(self.block_slice(jk) for jk in j)

    def rank(self, j: Sequence[int]) -> int:
        return block_rank(j, self.n_blocks)

    def block(self, j: Sequence[int]) -> np.ndarray:
        """Return the stored block ``j`` (a view; ``j`` must be non-decreasing)."""
        j = tuple(j)
        if len(j) != self.order:
            raise MultiIndexError(f"Block index {j} has length {len(j)}, expected {self.order}")
        if any(a > b for a, b in zip(j, j[1:])):
            raise MultiIndexError(f"Block index {j} is not non-decreasing")
        if j and (j[0] < 0 or j[-1] >= self.n_blocks):
            raise MultiIndexError(f"Block index {j} out of range 0..{self.n_blocks - 1}")
        return self._blocks[self.rank(j)]

    def blocks(self) -> Iterator[Tuple[MultiIndex, np.ndarray]]:
        """Iterate stored blocks in multiset-lexicographic order."""
        return zip(iter(self._indices), iter(self._blocks))

    def block_items(self) -> Iterator[Tuple[MultiIndex, int, np.ndarray]]:
        """Iterate ``(j, multiplicity, block)`` triples."""
        return zip(iter(self._indices), iter(self._multiplicities), iter(self._blocks))

    def _locate(self, index: Sequence[int]) -> Tuple[int, MultiIndex]:
        if len(index) != self.order:
            raise MultiIndexError(
                f"Multi-index {tuple(index)} has length {len(index)}, expected {self.order}"
            )
        canonical = canonicalize(index)
        if canonical[0] < 0 or canonical[-1] >= self.dim:
            raise MultiIndexError(
                f"Multi-index {tuple(index)} out of range 0..{self.dim - 1}"
            )
        j = tuple(i // self.block_size for i in canonical)
        offsets = tuple(i - jk * self.block_size for i, jk in zip(canonical, j))
        return self.rank(j), offsets

    def get(self, index: Sequence[int]) -> float:
        """Element at ``index``; any permutation of ``index`` gives the same value."""
        rank, offsets = self._locate(index)
        return float(self._blocks[rank][offsets])

    __getitem__ = get

    def set(self, index: Sequence[int], value: float) -> None:
        """Write ``value`` at ``index`` and at every symmetric copy inside its block."""
        rank, offsets = self._locate(index)
        j = self._indices[rank]
        block = self._blocks[rank]
        for perm in itertools.permutations(range(self.order)):
            if all(j[p] == j[m] for m, p in enumerate(perm)):
                block[tuple(offsets[p] for p in perm)] = value

    __setitem__ = set

    def to_dense(self) -> np.ndarray:
        """Expand into a dense ``dim ** order`` array (intended for small tensors)."""
        dense = np.zeros((self.dim,) * self.order)
        for j, block in self.blocks():
            placed = set()
            for perm in itertools.permutations(range(self.order)):
                target = tuple(j[p] for p in perm)
                if target in placed:
                    continue
                placed.add(target)
                dense[self._slices(target)] = np.transpose(block, perm)
        return dense

    def _check_compatible(self, other: "SymTensor") -> None:
        if self.shape != other.shape:
            raise ShapeError(
                f"Tensor shapes differ: (order, dim, block_size) {self.shape} vs {other.shape}"
            )

    def copy(self) -> "SymTensor":
        return SymTensor(self.order, self.dim, self.block_size,
                         [block.copy() for block in self._blocks])

    def axpy(self, other: "SymTensor", a: float) -> "SymTensor":
        """Return ``self + a * other`` as a new tensor."""
        self._check_compatible(other)
        blocks = [mine + a * theirs for mine, theirs in zip(self._blocks, other._blocks)]
        return SymTensor(self.order, self.dim, self.block_size, blocks)

    def scale(self, a: float) -> "SymTensor":
        return SymTensor(self.order, self.dim, self.block_size,
                         [a * block for block in self._blocks])

    def knorm(self, k: float = 2.0) -> float:
        """Elementwise k-norm of the full tensor, summed block by block.

        Each stored block contributes its multiplicity times the sum of
        ``|e| ** k`` over its elements.
        """
        if k < 1:
            raise ConfigurationError(f"Norm exponent must be >= 1, got {k}")
        total = 0.0
        for _, multiplicity, block in self.block_items():
            if k == 2:
                partial = float(np.vdot(block, block))
            else:
                partial = float(np.sum(np.abs(block) ** k))
            total += multiplicity * partial
        return total ** (1.0 / k)

    def allclose(self, other: "SymTensor", rtol: float = 1e-10, atol: float = 0.0) -> bool:
        self._check_compatible(other)
        return all(np.allclose(mine, theirs, rtol=rtol, atol=atol)
                   for mine, theirs in zip(self._blocks, other._blocks))

    def to_flat(self) -> np.ndarray:
        """Concatenate C-order block contents in multiset-lexicographic order."""
        if not self._blocks:
            return np.zeros(0)
        return np.concatenate([block.ravel() for block in self._blocks])

    @classmethod
    def from_flat(cls, order: int, dim: int, block_size: int,
                  data: np.ndarray) -> "SymTensor":
        tensor = cls(order, dim, block_size)
        data = np.asarray(data, dtype=np.float64)
        if data.size != tensor.stored_elements:
            raise ShapeError(
                f"Flat dump holds {data.size} values, expected {tensor.stored_elements}"
            )
        offset = 0
        for rank, j in enumerate(tensor._indices):
            shape = tensor.extents(j)
            size = math.prod(shape)
            tensor._blocks[rank] = data[offset:offset + size].reshape(shape).copy()
            offset += size
        return tensor

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "dim": self.dim,
            "block_size": self.block_size,
            "blocks": [block.tolist() for block in self._blocks],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "SymTensor":
        tensor = cls(payload["order"], payload["dim"], payload["block_size"])
        blocks = [np.asarray(block, dtype=np.float64).reshape(tensor.extents(j))
                  for j, block in zip(tensor._indices, payload["blocks"])]
        return cls(tensor.order, tensor.dim, tensor.block_size, blocks)


def new_sym_tensor(order: int, dim: int, block_size: int) -> SymTensor:
    """Zero-filled tensor with every stored block allocated."""
    return SymTensor.zeros(order, dim, block_size)
