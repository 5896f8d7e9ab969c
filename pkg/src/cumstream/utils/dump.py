# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Binary dumps of tensor series.

A dump is a numpy ``.npz`` archive holding ``meta = [max_order, dim,
block_size]`` and one flat vector ``order_<s>`` per order, each the
concatenated C-order block contents in multiset-lexicographic order.
"""

from pathlib import Path
from typing import List, Sequence, Union

import numpy as np

from ..exceptions import DataFormatError, ShapeError
from ..tensors import SymTensor


def save_series(path: Union[str, Path], tensors: Sequence[SymTensor]) -> Path:
    """Write tensors of orders 1..d to ``path`` and return the written path."""
    if not tensors:
        raise ShapeError("Nothing to dump: empty tensor series")
    first = tensors[0]
    arrays = {f"order_{tensor.order}": tensor.to_flat() for tensor in tensors}
    path = Path(path)
    np.savez(path, meta=np.array([len(tensors), first.dim, first.block_size]), **arrays)
    return path if path.suffix == ".npz" else path.with_name(path.name + ".npz")


def load_series(path: Union[str, Path]) -> List[SymTensor]:
    """Read a dump written by :func:`save_series`."""
    with np.load(path) as archive:
        if "meta" not in archive:
            raise DataFormatError(f"{path} is not a tensor series dump")
        max_order, dim, block_size = (int(v) for v in archive["meta"])
        try:
            return [SymTensor.from_flat(order, dim, block_size, archive[f"order_{order}"])
                    for order in range(1, max_order + 1)]
        except KeyError as e:
            raise DataFormatError(f"{path} is missing {e}")
