# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""CLI writing the synthetic Gaussian / t-copula experiment stream as CSV."""

import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..generators import GenConfig, experiment_stream
from .common import (
    EXIT_OK,
    UsageArgumentParser,
    add_logging_flags,
    configure_logging,
    run_command,
)

logger = logging.getLogger(__name__)


def sidecar_path(output: str) -> Path:
    """Path of the JSON file describing the generator configuration of ``output``."""
    return Path(output).with_suffix(".json")


def build_parser() -> UsageArgumentParser:
    parser = UsageArgumentParser(
        prog="cumstream-datagen",
        description="Generate a Gaussian window followed by t-copula update batches "
                    "with Gaussian marginals",
        epilog="Writes t + (windows - 1) * update rows and a sidecar JSON next to the CSV.",
    )
    parser.add_argument("--n", type=int, required=True, help="Number of variables")
    parser.add_argument("--window", type=int, required=True, help="Rows of the Gaussian window t")
    parser.add_argument("--update", type=int, required=True, help="Rows per t-copula batch t_up")
    parser.add_argument("--windows", type=int, required=True,
                        help="Number of windows w_max (one Gaussian plus w_max - 1 batches)")
    parser.add_argument("--dof", type=float, default=10.0,
                        help="Degrees of freedom of the t-copula (default: 10)")
    parser.add_argument("--seed", type=int, required=True, help="Root seed (required)")
    parser.add_argument("-o", "--output", required=True, help="Output CSV file")
    parser.add_argument("--header", action="store_true", help="Write a x0,x1,... header line")
    add_logging_flags(parser)
    return parser


def _datagen(args) -> int:
    cfg = GenConfig(n=args.n, t=args.window, t_up=args.update, w_max=args.windows,
                    copula_dof=args.dof, seed=args.seed)
    with open(args.output, "w", encoding="utf-8") as handle:
        if args.header:
            handle.write(",".join(f"x{i}" for i in range(cfg.n)) + "\n")
        for batch in experiment_stream(cfg):
            np.savetxt(handle, batch, delimiter=",", fmt="%.17g")

    sidecar = sidecar_path(args.output)
    sidecar.write_text(json.dumps(cfg.to_dict(), indent=2) + "\n", encoding="utf-8")
    logger.info("Stream of %d rows x %d variables written to %s (config: %s)",
                cfg.total_rows, cfg.n, args.output, sidecar)
    return EXIT_OK


def main(argv=None) -> int:
    """Main entry point for the cumstream-datagen command."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    return run_command(_datagen, args)


if __name__ == "__main__":
    sys.exit(main())
