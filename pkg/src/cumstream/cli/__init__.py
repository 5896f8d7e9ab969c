# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Command-line interface for cumstream."""

from .bench import main as bench_main
from .datagen import main as datagen_main
from .main import main
from .process import main as process_main

__all__ = ["main", "bench_main", "datagen_main", "process_main"]
