# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Synthetic data stream generators."""

from .copula import (
    GenConfig,
    default_correlation,
    experiment_stream,
    gaussian_batch,
    tcopula_batch,
    tcopula_uniforms,
)

__all__ = [
    "GenConfig",
    "default_correlation",
    "experiment_stream",
    "gaussian_batch",
    "tcopula_batch",
    "tcopula_uniforms",
]
