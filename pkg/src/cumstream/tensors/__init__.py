# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Block-structured super-symmetric tensors."""

from .symtensor import (
    MultiIndex,
    SymTensor,
    block_multiplicity,
    block_rank,
    canonicalize,
    new_sym_tensor,
)

__all__ = [
    "MultiIndex",
    "SymTensor",
    "block_multiplicity",
    "block_rank",
    "canonicalize",
    "new_sym_tensor",
]
