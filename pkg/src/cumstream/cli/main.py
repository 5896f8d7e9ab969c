# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Main CLI entry point for cumstream."""

import sys

from . import bench, datagen, process
from .common import EXIT_OK, EXIT_USAGE

COMMANDS = {
    "process": process.main,
    "datagen": datagen.main,
    "bench": bench.main,
}

USAGE = """cumstream - Sliding-window higher-order cumulants for data streams

Usage:
  cumstream process ...   - Stream cumulant reports (JSON lines) over CSV samples
  cumstream datagen ...   - Write the Gaussian / t-copula experiment stream as CSV
  cumstream bench ...     - Measure update speedup over full recalculation

For more help on each command, run it with --help
"""


def main(argv=None):
    """Main entry point that dispatches to process, datagen or bench."""
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(USAGE)
        return EXIT_OK
    command = COMMANDS.get(argv[0])
    if command is None:
        sys.stderr.write(f"cumstream: unknown command {argv[0]!r}\n\n{USAGE}")
        return EXIT_USAGE
    return command(argv[1:])


if __name__ == "__main__":
    sys.exit(main())
