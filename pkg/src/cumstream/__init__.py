# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""cumstream: Sliding-window higher-order cumulant tensors for data streams."""

__version__ = "0.1.0.dev0"
__author__ = "Walter M. Rafelsberger"

from .exceptions import CumstreamError
from .statistics import CumulantSeries, MomentSeries, WindowReport
from .stream import StreamConfig, prime, run, step
from .tensors import SymTensor

__all__ = [
    "CumstreamError",
    "CumulantSeries",
    "MomentSeries",
    "StreamConfig",
    "SymTensor",
    "WindowReport",
    "__version__",
    "prime",
    "run",
    "step",
]
