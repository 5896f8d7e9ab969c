# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Shared fixtures for the cumstream test suite."""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from cumstream.utils.workers import WORKERS_ENV


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture
def rng():
    """Seeded generator so that every test sees the same random data."""
    return np.random.default_rng(20240611)


@pytest.fixture
def small_batch(rng):
    """200 samples of 4 correlated, skewed variables."""
    base = rng.standard_normal((200, 4))
    return base @ np.array([[1.0, 0.3, 0.0, 0.1],
                            [0.0, 1.0, 0.5, 0.0],
                            [0.0, 0.0, 1.0, 0.2],
                            [0.0, 0.0, 0.0, 1.0]]) + 0.5 * base ** 2


@pytest.fixture
def toy_stream():
    """Univariate stream 1..6 used with t=4, t_up=2."""
    return np.arange(1.0, 7.0).reshape(-1, 1)


@pytest.fixture
def no_workers_env(monkeypatch):
    """Make sure CUMSTREAM_WORKERS does not leak in from the environment."""
    monkeypatch.delenv(WORKERS_ENV, raising=False)
