# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Benchmark harness: sliding update versus full recalculation.

Both sides run the production code paths: :func:`prime` and :func:`step`
for the update, :func:`cumulant_series` over the materialized window for
the recalculation.
"""

import itertools
import logging
import math
import statistics
import sys
import time
from dataclasses import asdict, dataclass
from typing import Any, Dict

from ..generators import GenConfig, experiment_stream
from ..statistics import cumulant_series, predicted_speedup
from ..stream import StreamConfig, prime, step
from ..utils import resolve_workers
from .common import (
    EXIT_OK,
    RunManifest,
    UsageArgumentParser,
    add_logging_flags,
    configure_logging,
    run_command,
)

logger = logging.getLogger(__name__)

DEFAULT_MEMORY_BUDGET = 500_000_000
MIN_STEPS = 5


def estimate_elements(n: int, d: int, b: int) -> int:
    """Stored elements of one moment series of orders 1..d, edge blocks counted full."""
    n_blocks = -(-n // b)
    return sum(math.comb(n_blocks + s - 1, s) * b ** s for s in range(1, d + 1))


@dataclass
class BenchResult:
    """Timings of one grid point."""

    n: int
    d: int
    b: int
    t: int
    t_up: int
    workers: int
    step_seconds: float
    recalc_seconds: float
    speedup: float
    predicted_speedup: float
    frequency_hz: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def measure(n: int, d: int, b: int, t: int, t_up: int, steps: int = MIN_STEPS,
            warmup: int = 1, recalc_repeats: int = 3, workers: int = 1,
            seed: int = 0) -> BenchResult:
    """Median step time and median recalculation time at one grid point.

    Args:
        n, d, b, t, t_up: Stream shape
        steps: Timed update steps (at least 5)
        warmup: Untimed steps run first
        recalc_repeats: Timed full recalculations of the final window
        workers: Worker threads for both paths
        seed: Seed of the synthetic stream

    Returns:
        The grid point result with measured and predicted speedup
    """
    steps = max(steps, MIN_STEPS)
    config = StreamConfig(n=n, d=d, t=t, t_up=t_up, b=b, resync_every=0, workers=workers)
    gen = GenConfig(n=n, t=t, t_up=t_up, w_max=1 + warmup + steps, seed=seed)
    batches = experiment_stream(gen)

    state = prime(config, next(batches))
    step_times = []
    for index, batch in enumerate(batches):
        state, _ = step(state, batch)
        if index >= warmup:
            step_times.append(state.last_timings.total)

    window = state.buffer.contents()
    recalc_times = []
    for _ in range(max(recalc_repeats, 1)):
        started = time.perf_counter()
        cumulant_series(window, d, b, workers)
        recalc_times.append(time.perf_counter() - started)

    step_seconds = statistics.median(step_times)
    recalc_seconds = statistics.median(recalc_times)
    return BenchResult(
        n=n, d=d, b=b, t=t, t_up=t_up, workers=workers,
        step_seconds=step_seconds,
        recalc_seconds=recalc_seconds,
        speedup=recalc_seconds / step_seconds,
        predicted_speedup=predicted_speedup(t, t_up, d),
        frequency_hz=t_up / step_seconds,
    )


def build_parser() -> UsageArgumentParser:
    parser = UsageArgumentParser(
        prog="cumstream-bench",
        description="Measure cumulant update speedup over full recalculation on a parameter grid",
    )
    parser.add_argument("--n", type=int, nargs="+", default=[30], help="Numbers of variables")
    parser.add_argument("--order", type=int, nargs="+", default=[4], help="Cumulant orders d")
    parser.add_argument("--block", type=int, nargs="+", default=[4], help="Block sizes b")
    parser.add_argument("--window", type=int, nargs="+", default=[100_000],
                        help="Window lengths t")
    parser.add_argument("--update", type=int, nargs="+", default=[5_000],
                        help="Update batch lengths t_up")
    parser.add_argument("--steps", type=int, default=MIN_STEPS,
                        help=f"Timed update steps per grid point (at least {MIN_STEPS})")
    parser.add_argument("--warmup", type=int, default=1, help="Untimed steps per grid point")
    parser.add_argument("--recalc-repeats", type=int, default=3,
                        help="Timed full recalculations per grid point")
    parser.add_argument("--memory-budget", type=int, default=DEFAULT_MEMORY_BUDGET,
                        help="Skip grid points whose tensors exceed this many elements")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the synthetic stream")
    parser.add_argument("-o", "--output", default="-",
                        help="Manifest JSON file (default: stdout)")
    parser.add_argument("--workers", type=int, nargs="+",
                        help="Worker thread counts to sweep (default: CPU count; "
                             "CUMSTREAM_WORKERS overrides)")
    add_logging_flags(parser)
    return parser


def _bench(args) -> int:
    # CUMSTREAM_WORKERS collapses the sweep to a single value
    worker_counts = list(dict.fromkeys(resolve_workers(w) for w in args.workers or [None]))
    manifest = RunManifest("bench", {
        "n": args.n, "d": args.order, "b": args.block, "t": args.window,
        "t_up": args.update, "steps": max(args.steps, MIN_STEPS), "warmup": args.warmup,
        "memory_budget": args.memory_budget, "seed": args.seed,
    }, worker_counts, per_window=False)

    for n, d, b, t, t_up, workers in itertools.product(args.n, args.order, args.block,
                                                       args.window, args.update,
                                                       worker_counts):
        if b > n or t_up > t:
            logger.warning("Skipping n=%d b=%d t=%d t_up=%d: invalid combination", n, b, t, t_up)
            continue
        elements = estimate_elements(n, d, b)
        if elements > args.memory_budget:
            logger.warning("Skipping n=%d d=%d b=%d: %d tensor elements exceed the budget of %d",
                           n, d, b, elements, args.memory_budget)
            continue
        result = measure(n, d, b, t, t_up, steps=args.steps, warmup=args.warmup,
                         recalc_repeats=args.recalc_repeats, workers=workers, seed=args.seed)
        logger.info("n=%d d=%d b=%d t=%d t_up=%d workers=%d: step %.4fs, recalculation %.4fs, "
                    "speedup %.2f (predicted %.2f), %.0f Hz", n, d, b, t, t_up, workers,
                    result.step_seconds, result.recalc_seconds, result.speedup,
                    result.predicted_speedup, result.frequency_hz)
        manifest.results.append(result.to_dict())

    manifest.write(args.output)
    return EXIT_OK


def main(argv=None) -> int:
    """Main entry point for the cumstream-bench command."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    return run_command(_bench, args)


if __name__ == "__main__":
    sys.exit(main())
