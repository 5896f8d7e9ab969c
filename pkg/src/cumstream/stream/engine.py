# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Sliding-window cumulant engine.

A stream is primed with one window of t rows; every following batch of
t_up rows replaces the oldest t_up rows, the moment tensors are updated
from the two batches alone and the cumulants of the new window are emitted.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from ..exceptions import ConfigurationError, ShapeError
from ..statistics import (
    CumulantSeries,
    DataCostMeter,
    MomentSeries,
    WindowReport,
    as_batch,
    moment_series,
    moments_update,
    moms2cums,
    window_report,
)
from .window import WindowBuffer

logger = logging.getLogger(__name__)

ReportSink = Callable[[WindowReport], None]
WindowTap = Callable[["WindowState", CumulantSeries], None]


@dataclass
class StreamConfig:
    """Shape of one stream and its window.

    Attributes:
        n: Number of variables (columns)
        d: Highest cumulant order
        t: Window length in rows
        t_up: Rows per update batch
        b: Block size of the tensor storage
        resync_every: Recompute moments from the window every this many steps; <= 0 disables
        workers: Threads used inside moment and cumulant computations
    """

    n: int
    d: int
    t: int
    t_up: int
    b: int
    resync_every: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"Number of variables must be >= 1, got {self.n}")
        if self.d < 2:
            raise ConfigurationError(f"Cumulant order must be >= 2, got {self.d}")
        if self.t < 1:
            raise ConfigurationError(f"Window length must be >= 1, got {self.t}")
        if self.t_up < 1 or self.t_up > self.t:
            raise ConfigurationError(
                f"Update batch must have 1..{self.t} rows (the window length), got {self.t_up}"
            )
        if self.b < 1 or self.b > self.n:
            raise ConfigurationError(f"Block size must be in 1..{self.n}, got {self.b}")
        if self.workers < 1:
            raise ConfigurationError(f"Worker count must be >= 1, got {self.workers}")


@dataclass
class StepTimings:
    """Wall-clock seconds spent in the phases of one window."""

    update: float = 0.0
    moms2cums: float = 0.0
    gauge: float = 0.0
    total: float = 0.0


@dataclass
class WindowState:
    config: StreamConfig
    buffer: WindowBuffer
    moments: MomentSeries
    window_index: int = 1
    meter: DataCostMeter = field(default_factory=DataCostMeter)
    last_timings: StepTimings = field(default_factory=StepTimings)
    steps_since_resync: int = 0


def prime(config: StreamConfig, X1, meter: Optional[DataCostMeter] = None) -> WindowState:
    """Start a stream from its first window of exactly t rows.

    Args:
        config: Stream configuration
        X1: First window, t rows by n columns
        meter: Optional row-read counter carried by the state

    Returns:
        State of window 1
    """
    meter = meter if meter is not None else DataCostMeter()
    buffer = WindowBuffer(config.t, config.n)
    buffer.prime(X1)

    started = time.perf_counter()
    moments = moment_series(buffer.contents(), config.d, config.b, config.workers, meter)
    elapsed = time.perf_counter() - started

    logger.info("Stream primed: w=1 t=%d n=%d d=%d b=%d", config.t, config.n, config.d, config.b)
    return WindowState(config, buffer, moments, window_index=1, meter=meter,
                       last_timings=StepTimings(update=elapsed, total=elapsed))


def resync(state: WindowState) -> WindowState:
    """Replace the streamed moments with a fresh computation over the window.

    Re-reading the window is not counted by the state's data-cost meter.
    """
    config = state.config
    state.moments = moment_series(state.buffer.contents(), config.d, config.b, config.workers)
    state.steps_since_resync = 0
    logger.info("Moments resynchronised from the window at w=%d", state.window_index)
    return state


def step(state: WindowState, X_plus) -> Tuple[WindowState, CumulantSeries]:
    """Advance the window by one batch and return the cumulants of the new window.

    Args:
        state: Current stream state, updated in place
        X_plus: Incoming batch of exactly t_up rows

    Returns:
        Tuple of (state, cumulants of window w + 1)
    """
    config = state.config
    incoming = as_batch(X_plus, config.n)
    if incoming.shape[0] != config.t_up:
        raise ShapeError(
            f"Update batch has {incoming.shape[0]} rows, expected t_up={config.t_up}"
        )

    started = time.perf_counter()
    rows_before = state.meter.rows_read
    outgoing = state.buffer.shift(incoming)
    state.moments = moments_update(state.moments, incoming, outgoing, config.workers, state.meter)
    state.window_index += 1
    state.steps_since_resync += 1
    if config.resync_every > 0 and state.steps_since_resync >= config.resync_every:
        resync(state)
    updated = time.perf_counter()

    cumulants = moms2cums(state.moments, config.workers)
    finished = time.perf_counter()

    state.last_timings = StepTimings(update=updated - started, moms2cums=finished - updated,
                                     total=finished - started)
    logger.debug("w=%d update=%.6fs moms2cums=%.6fs rows_read=%d", state.window_index,
                 state.last_timings.update, state.last_timings.moms2cums,
                 state.meter.rows_read - rows_before)
    return state, cumulants


def _report(state: WindowState, cumulants: CumulantSeries) -> WindowReport:
    started = time.perf_counter()
    report = window_report(state.window_index, cumulants)
    state.last_timings.gauge = time.perf_counter() - started
    state.last_timings.total += state.last_timings.gauge
    return report


def run(config: StreamConfig, source: Iterable, sink: ReportSink,
        tap: Optional[WindowTap] = None,
        meter: Optional[DataCostMeter] = None) -> WindowState:
    """Process a whole stream, emitting one report per window.

    Args:
        config: Stream configuration
        source: Iterable yielding one t-row batch, then t_up-row batches
        sink: Called with the report of every window, in order
        tap: Optional callback receiving the state and cumulants of every window
        meter: Optional row-read counter

    Returns:
        The final stream state
    """
    batches = iter(source)
    try:
        first = next(batches)
    except StopIteration:
        raise ShapeError("Source yielded no priming batch")

    state = prime(config, first, meter)
    started = time.perf_counter()
    cumulants = moms2cums(state.moments, config.workers)
    state.last_timings.moms2cums = time.perf_counter() - started
    state.last_timings.total += state.last_timings.moms2cums
    report = _report(state, cumulants)
    if tap is not None:
        tap(state, cumulants)
    sink(report)

    rows = config.t
    for batch in batches:
        batch = np.asarray(batch, dtype=np.float64)
        if batch.ndim == 2 and batch.shape[0] < config.t_up:
            if next(batches, None) is not None:
                raise ShapeError(
                    f"Short batch of {batch.shape[0]} rows in the middle of the stream"
                )
            logger.warning("Discarding partial final batch of %d rows (t_up=%d)",
                           batch.shape[0], config.t_up)
            break
        state, cumulants = step(state, batch)
        report = _report(state, cumulants)
        if tap is not None:
            tap(state, cumulants)
        sink(report)
        rows += config.t_up

    logger.info("Run finished: %d windows, %d rows", state.window_index, rows)
    return state
