# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""CLI for sliding-window cumulant reports over a CSV stream."""

import logging
import sys
from contextlib import ExitStack
from dataclasses import asdict
from pathlib import Path

from ..statistics import CumulantSeries, WindowReport
from ..stream import StreamConfig, WindowState, run
from ..utils import CsvBatchSource, resolve_workers, save_series
from .common import (
    EXIT_OK,
    RunManifest,
    UsageArgumentParser,
    add_logging_flags,
    add_workers_flag,
    configure_logging,
    run_command,
)

logger = logging.getLogger(__name__)

DEFAULT_BLOCK = 2


def build_parser() -> UsageArgumentParser:
    parser = UsageArgumentParser(
        prog="cumstream-process",
        description="Stream higher-order cumulants over a sliding window of CSV samples",
        epilog='Use "-" as input to read from stdin. Example: '
               "cumstream-datagen --n 4 --window 1000 --update 100 --windows 5 --seed 1 "
               "-o s.csv && cumstream-process --input s.csv --n 4 --window 1000 --update 100",
    )
    parser.add_argument("--input", default="-", help="CSV file of samples (default: stdin)")
    parser.add_argument("--n", type=int, required=True, help="Number of variables (columns)")
    parser.add_argument("--order", type=int, default=4, help="Highest cumulant order d (default: 4)")
    parser.add_argument("--window", type=int, required=True, help="Window length t in rows")
    parser.add_argument("--update", type=int, required=True, help="Update batch length t_up in rows")
    parser.add_argument("--block", type=int,
                        help=f"Block size b (default: min({DEFAULT_BLOCK}, n))")
    parser.add_argument("-o", "--output", default="-",
                        help="JSON-lines report file (default: stdout)")
    parser.add_argument("--dump-cumulants", metavar="DIR",
                        help="Write the cumulants of every window to DIR/window-<w>.npz")
    parser.add_argument("--header", action="store_true", help="Skip the first CSV line")
    parser.add_argument("--resync-every", type=int, default=1000,
                        help="Recompute moments from the window every N steps, 0 disables "
                             "(default: 1000)")
    parser.add_argument("--manifest", metavar="PATH", help="Write the run manifest JSON to PATH")
    add_workers_flag(parser)
    add_logging_flags(parser)
    return parser


def _process(args) -> int:
    block = args.block if args.block is not None else min(DEFAULT_BLOCK, args.n)
    config = StreamConfig(n=args.n, d=args.order, t=args.window, t_up=args.update, b=block,
                          resync_every=args.resync_every,
                          workers=resolve_workers(args.workers))
    source = CsvBatchSource(args.input, config.n, config.t, config.t_up, header=args.header)
    manifest = RunManifest("process", asdict(config), config.workers)

    dump_dir = Path(args.dump_cumulants) if args.dump_cumulants else None
    if dump_dir is not None:
        dump_dir.mkdir(parents=True, exist_ok=True)

    with ExitStack() as stack:
        if args.output == "-":
            out = sys.stdout
        else:
            out = stack.enter_context(open(args.output, "w", encoding="utf-8"))

        def sink(report: WindowReport) -> None:
            out.write(report.to_json() + "\n")

        def tap(state: WindowState, cumulants: CumulantSeries) -> None:
            rows = config.t if state.window_index == 1 else config.t_up
            manifest.add_window(state.last_timings, rows)
            if dump_dir is not None:
                save_series(dump_dir / f"window-{state.window_index:06d}.npz", cumulants.tensors)

        state = run(config, source, sink, tap)

    if args.output != "-":
        logger.info("%d window reports written to %s", state.window_index, args.output)
    if args.manifest:
        manifest.write(args.manifest)
    return EXIT_OK


def main(argv=None) -> int:
    """Main entry point for the cumstream-process command."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    return run_command(_process, args)


if __name__ == "__main__":
    sys.exit(main())
