# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Sliding-window stream engine."""

from .engine import StepTimings, StreamConfig, WindowState, prime, resync, run, step
from .window import WindowBuffer

__all__ = [
    "StepTimings",
    "StreamConfig",
    "WindowBuffer",
    "WindowState",
    "prime",
    "resync",
    "run",
    "step",
]
