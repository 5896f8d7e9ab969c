# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Cumulant-based gauges of non-Gaussianity, error bounds and cost predictors."""

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from ..exceptions import ConfigurationError, DegenerateDataError, ShapeError
from ..tensors import SymTensor
from .cumulants import CumulantSeries
from .moments import as_batch
from .partitions import bell, stirling2

# Variances at or below this fraction of the raw second moment are rounding residue.
DEGENERACY_RTOL = 1e-12


class UnivariateKind(str, Enum):
    """Standardised univariate cumulant reported per column."""

    SKEWNESS = "skewness"
    KURTOSIS = "kurtosis"


REPORT_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "WindowReport",
    "type": "object",
    "required": ["window", "norm_c1", "norm_c2", "nu", "max_abs_skew", "max_abs_kurt"],
    "additionalProperties": False,
    "properties": {
        "window": {"type": "integer", "minimum": 1},
        "norm_c1": {"type": "number", "minimum": 0},
        "norm_c2": {"type": "number", "minimum": 0},
        "nu": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "number", "minimum": 0}},
            "additionalProperties": False,
        },
        "max_abs_skew": {"type": ["number", "null"], "minimum": 0},
        "max_abs_kurt": {"type": ["number", "null"], "minimum": 0},
    },
}


@dataclass
class WindowReport:
    """Per-window statistics emitted by the stream engine."""

    window: int
    norm_c1: float
    norm_c2: float
    nu: Dict[int, float] = field(default_factory=dict)
    max_abs_skew: Optional[float] = None
    max_abs_kurt: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "window": self.window,
            "norm_c1": self.norm_c1,
            "norm_c2": self.norm_c2,
            "nu": {str(order): value for order, value in sorted(self.nu.items())},
            "max_abs_skew": self.max_abs_skew,
            "max_abs_kurt": self.max_abs_kurt,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "WindowReport":
        return cls(
            window=payload["window"],
            norm_c1=payload["norm_c1"],
            norm_c2=payload["norm_c2"],
            nu={int(order): value for order, value in payload["nu"].items()},
            max_abs_skew=payload.get("max_abs_skew"),
            max_abs_kurt=payload.get("max_abs_kurt"),
        )


def _second_moment_norm(C: CumulantSeries) -> float:
    """||M_2|| rebuilt from the cumulants as ||C_2 + C_1 (x) C_1||."""
    c1 = C[1].to_dense()
    outer = SymTensor.from_dense(np.outer(c1, c1), C[2].block_size)
    return C[2].axpy(outer, 1.0).knorm(2)


def _check_variances(k2: np.ndarray, m2: np.ndarray) -> None:
    if np.any(k2 <= DEGENERACY_RTOL * m2):
        raise DegenerateDataError("At least one variable has zero variance")


def nu(C: CumulantSeries, order: int) -> float:
    """Non-Gaussianity gauge ||C_order||_2 / ||C_2||_2 ** (order / 2).

    For a single variable this is |skewness| (order 3) or |excess kurtosis|
    (order 4).
    """
    if order <= 2:
        raise ConfigurationError(f"Gauge order must be > 2, got {order}")
    if C.max_order < order:
        raise ShapeError(f"Series holds orders up to {C.max_order}, gauge needs {order}")
    scale = C[2].knorm(2)
    if scale <= DEGENERACY_RTOL * _second_moment_norm(C):
        raise DegenerateDataError("Covariance norm is zero; the window carries no variance")
    return C[order].knorm(2) / scale ** (order / 2)


def _standardised(k2: np.ndarray, k3: np.ndarray, k4: Optional[np.ndarray],
                  kind: UnivariateKind) -> float:
    if kind == UnivariateKind.SKEWNESS:
        values = k3 / k2 ** 1.5
    else:
        values = k4 / k2 ** 2
    return float(np.max(np.abs(values)))


def max_abs_univariate(X, kind) -> float:
    """Largest absolute skewness or excess kurtosis over the columns of a batch.

    Args:
        X: Batch of at least 4 rows
        kind: "skewness" or "kurtosis"

    Returns:
        max over columns of |k3 / k2^1.5| or |k4 / k2^2| from raw moments
    """
    kind = UnivariateKind(kind)
    batch = as_batch(X)
    if batch.shape[0] < 4:
        raise ShapeError(f"Univariate statistics need at least 4 rows, got {batch.shape[0]}")
    m1, m2, m3, m4 = (np.mean(batch ** power, axis=0) for power in range(1, 5))
    k2 = m2 - m1 ** 2
    _check_variances(k2, m2)
    k3 = m3 - 3 * m2 * m1 + 2 * m1 ** 3
    k4 = m4 - 4 * m3 * m1 - 3 * m2 ** 2 + 12 * m2 * m1 ** 2 - 6 * m1 ** 4
    return _standardised(k2, k3, k4, kind)


def _diagonal(tensor: SymTensor) -> np.ndarray:
    """Super-diagonal entries t_{i..i} for i = 0..n-1."""
    parts = []
    for jk in range(tensor.n_blocks):
        block = tensor.block((jk,) * tensor.order)
        offsets = np.arange(tensor.extent(jk))
        parts.append(block[(offsets,) * tensor.order])
    return np.concatenate(parts)


def max_abs_univariate_from_cumulants(C: CumulantSeries, kind) -> float:
    """Same statistic as :func:`max_abs_univariate`, read off the cumulant diagonals."""
    kind = UnivariateKind(kind)
    needed = 3 if kind == UnivariateKind.SKEWNESS else 4
    if C.max_order < needed:
        raise ShapeError(f"{kind.value} needs cumulants up to order {needed}")
    k2 = _diagonal(C[2])
    _check_variances(k2, k2 + _diagonal(C[1]) ** 2)
    k4 = _diagonal(C[4]) if needed == 4 else None
    return _standardised(k2, _diagonal(C[3]), k4, kind)


def window_report(window: int, C: CumulantSeries) -> WindowReport:
    """Norms of C_1 and C_2, gauges nu_3..nu_d and univariate extremes of a window."""
    return WindowReport(
        window=window,
        norm_c1=C[1].knorm(2),
        norm_c2=C[2].knorm(2),
        nu={order: nu(C, order) for order in range(3, C.max_order + 1)},
        max_abs_skew=(max_abs_univariate_from_cumulants(C, UnivariateKind.SKEWNESS)
                      if C.max_order >= 3 else None),
        max_abs_kurt=(max_abs_univariate_from_cumulants(C, UnivariateKind.KURTOSIS)
                      if C.max_order >= 4 else None),
    )


def double_factorial(k: int) -> int:
    """k!! = k * (k - 2) * ...; 1 for k <= 0."""
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def moment_error_bound(d: int, t: int, m2d: float) -> float:
    """Standard-error bound sqrt(m_2d / t) of a d-th moment estimated from t rows."""
    if t < 1:
        raise ConfigurationError(f"Sample count must be >= 1, got {t}")
    if m2d < 0:
        raise ConfigurationError(f"Moment m_2d must be >= 0, got {m2d}")
    return math.sqrt(m2d / t)


def gaussian_moment_error_bound(d: int, t: int) -> float:
    """The bound for standard Gaussian data, where m_2d = (2d - 1)!!."""
    return moment_error_bound(d, t, double_factorial(2 * d - 1))


def predicted_speedup(t: int, t_up: int, d: int) -> float:
    """Predicted speedup of a cumulant update over full recalculation: t / (2 t_up + B(d))."""
    return t / (2 * t_up + bell(d))


def moment_update_speedup(t: int, t_up: int) -> float:
    """Predicted speedup of the moment update alone: t / (2 t_up)."""
    return t / (2 * t_up)


def partition_multiplications(d: int) -> int:
    """Multiplications per element of the outer product: sum_sigma S(d, sigma)(sigma - 1)."""
    return sum(stirling2(d, sigma) * (sigma - 1) for sigma in range(1, d + 1))


def moment_update_multiplications(n: int, d: int, t_up: int) -> float:
    return sum(2 * n ** k / math.factorial(k) * (k - 1) * t_up for k in range(1, d + 1))


def cumulant_multiplications(n: int, d: int) -> float:
    return sum(n ** k / math.factorial(k) * (k - 1) * bell(k) for k in range(1, d + 1))


def cumulant_update_multiplications(n: int, d: int, t_up: int) -> float:
    """Moment update plus moment-to-cumulant conversion for a series of orders 1..d."""
    return moment_update_multiplications(n, d, t_up) + cumulant_multiplications(n, d)


def recalculation_multiplications(n: int, d: int, t: int) -> float:
    return sum(n ** k / math.factorial(k) * (k - 1) * t for k in range(1, d + 1))
