# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Moment and cumulant tensors, set partitions and non-Gaussianity gauges."""

from .cumulants import CumulantSeries, cumulant_series, moms2cums, sym_outer_element
from .gauge import (
    REPORT_SCHEMA,
    UnivariateKind,
    WindowReport,
    cumulant_multiplications,
    cumulant_update_multiplications,
    double_factorial,
    gaussian_moment_error_bound,
    max_abs_univariate,
    max_abs_univariate_from_cumulants,
    moment_error_bound,
    moment_update_multiplications,
    moment_update_speedup,
    nu,
    partition_multiplications,
    predicted_speedup,
    recalculation_multiplications,
    window_report,
)
from .moments import (
    DataCostMeter,
    MomentSeries,
    as_batch,
    combine,
    moment_series,
    moment_tensor,
    moments_update,
)
from .partitions import SetPartition, bell, partitions, restricted_growth_strings, stirling2

__all__ = [
    "REPORT_SCHEMA",
    "CumulantSeries",
    "DataCostMeter",
    "MomentSeries",
    "SetPartition",
    "UnivariateKind",
    "WindowReport",
    "as_batch",
    "bell",
    "combine",
    "cumulant_multiplications",
    "cumulant_series",
    "cumulant_update_multiplications",
    "double_factorial",
    "gaussian_moment_error_bound",
    "max_abs_univariate",
    "max_abs_univariate_from_cumulants",
    "moment_error_bound",
    "moment_series",
    "moment_tensor",
    "moment_update_multiplications",
    "moment_update_speedup",
    "moments_update",
    "moms2cums",
    "nu",
    "partition_multiplications",
    "partitions",
    "predicted_speedup",
    "recalculation_multiplications",
    "restricted_growth_strings",
    "stirling2",
    "sym_outer_element",
    "window_report",
]
