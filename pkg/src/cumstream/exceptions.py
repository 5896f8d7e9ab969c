# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Custom exceptions for cumstream package."""


class CumstreamError(Exception):
    """Base exception for cumstream package."""
    pass


class ConfigurationError(CumstreamError):
    """Raised when a parameter or configuration value is invalid."""
    pass


class ShapeError(CumstreamError):
    """Raised when tensor or batch shapes do not agree."""
    pass


class MultiIndexError(CumstreamError, IndexError):
    """Raised when a multi-index has the wrong length or is out of range."""
    pass


class DegenerateDataError(CumstreamError):
    """Raised when data carry no variance to normalise by."""
    pass


class DataFormatError(CumstreamError):
    """Raised when input data cannot be parsed."""
    pass
