# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Pieces shared by the cumstream commands: parser, logging, exit codes, manifest."""

import argparse
import json
import logging
import statistics
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from ..exceptions import (
    ConfigurationError,
    CumstreamError,
    DataFormatError,
    DegenerateDataError,
    MultiIndexError,
    ShapeError,
)
from ..stream import StepTimings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_UNEXPECTED = 255

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

DATA_ERRORS = (ShapeError, MultiIndexError, DegenerateDataError, DataFormatError)


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def add_logging_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("-v", "--verbose", action="store_true", help="Log per-step details")
    group.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only")


def add_workers_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int,
                        help="Worker threads (default: CPU count; CUMSTREAM_WORKERS overrides)")


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Send log records to stderr; stdout is reserved for command output."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def run_command(command: Callable[[argparse.Namespace], int], args: argparse.Namespace) -> int:
    """Run a command body and translate exceptions into exit codes."""
    try:
        return command(args)
    except ConfigurationError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_USAGE
    except FileNotFoundError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except DATA_ERRORS as e:
        logger.error("Data error: %s", e)
        return EXIT_DATA
    except CumstreamError as e:
        logger.error("Error: %s", e)
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.warning("Cancelled by user")
        return EXIT_USAGE
    except Exception as e:
        logger.exception("Unexpected error: %s", e)
        return EXIT_UNEXPECTED


@dataclass
class RunManifest:
    """Record of one command run: configuration, timings and throughput.

    With ``per_window`` off (the bench grid) the per-window timings, row count
    and throughput are left out; each grid result carries its own.
    """

    command: str
    config: Dict[str, Any]
    workers: Union[int, List[int]]
    timings: List[StepTimings] = field(default_factory=list)
    rows_processed: int = 0
    results: List[Dict[str, Any]] = field(default_factory=list)
    per_window: bool = True

    def add_window(self, timings: StepTimings, rows: int) -> None:
        self.timings.append(StepTimings(**asdict(timings)))
        self.rows_processed += rows

    @property
    def mean_step_seconds(self) -> float:
        """Mean total time of the update windows (window 1 is priming, not a step)."""
        steps = [timing.total for timing in self.timings[1:]]
        return statistics.fmean(steps) if steps else 0.0

    @property
    def frequency_hz(self) -> float:
        """Sustainable input rate t_up / mean step time; 0.0 when nothing was stepped."""
        mean = self.mean_step_seconds
        t_up = self.config.get("t_up")
        if not t_up or mean <= 0.0:
            return 0.0
        return t_up / mean

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "command": self.command,
            "config": self.config,
            "workers": self.workers,
        }
        if self.per_window:
            payload.update({
                "timings": [asdict(timing) for timing in self.timings],
                "rows_processed": self.rows_processed,
                "mean_step_seconds": self.mean_step_seconds,
                "frequency_hz": self.frequency_hz,
            })
        payload["results"] = self.results
        return payload

    def write(self, path: Optional[str]) -> None:
        """Write the manifest as JSON to ``path``, or to stdout for None or '-'."""
        text = json.dumps(self.to_dict(), indent=2)
        if path is None or path == "-":
            sys.stdout.write(text + "\n")
            return
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info("Manifest written to %s", path)
