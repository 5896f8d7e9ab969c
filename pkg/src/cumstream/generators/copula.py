# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Synthetic streams: a Gaussian window followed by t-copula batches.

The t-copula batches keep the Gaussian marginals of the first window, so
no single variable changes its distribution; only the joint higher-order
structure does.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy import special, stats

from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

# spawn-key roots of the generator streams
_CORRELATION_STREAM = 0
_BATCH_STREAM = 1


def _rng(seed: int, *key: int) -> Generator:
    """Counter-based generator for one independent stream of ``seed``."""
    return Generator(Philox(SeedSequence(seed, spawn_key=key)))


def default_correlation(n: int, seed: int) -> np.ndarray:
    """Dense random correlation matrix D^-1/2 A A^T D^-1/2 with A ~ Uniform[0, 1)."""
    A = _rng(seed, _CORRELATION_STREAM).random((n, n))
    gram = A @ A.T
    scale = 1.0 / np.sqrt(np.diag(gram))
    correlation = gram * scale[:, np.newaxis] * scale[np.newaxis, :]
    np.fill_diagonal(correlation, 1.0)
    return correlation


@dataclass
class GenConfig:
    """Parameters of the synthetic experiment stream.

    Attributes:
        n: Number of variables
        t: Rows of the initial Gaussian window
        t_up: Rows per t-copula update batch
        w_max: Number of windows (one Gaussian plus w_max - 1 updates)
        copula_dof: Degrees of freedom of the t-copula
        mu: Means, zeros by default
        sigma: Covariance, :func:`default_correlation` by default
        seed: Root seed of every generated batch
    """

    n: int
    t: int
    t_up: int
    w_max: int
    copula_dof: float = 10.0
    mu: Optional[np.ndarray] = None
    sigma: Optional[np.ndarray] = None
    seed: int = 0
    _cholesky: np.ndarray = field(init=False, repr=False)
    _correlation_cholesky: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"Number of variables must be >= 1, got {self.n}")
        if self.t < 1:
            raise ConfigurationError(f"Window length must be >= 1, got {self.t}")
        if self.t_up < 1 or self.t_up > self.t:
            raise ConfigurationError(f"Update batch must have 1..{self.t} rows, got {self.t_up}")
        if self.w_max < 1:
            raise ConfigurationError(f"w_max must be >= 1, got {self.w_max}")
        if not self.copula_dof > 2:
            raise ConfigurationError(f"Copula degrees of freedom must be > 2, got {self.copula_dof}")

        self.mu = (np.zeros(self.n) if self.mu is None
                   else np.asarray(self.mu, dtype=np.float64))
        self.sigma = (default_correlation(self.n, self.seed) if self.sigma is None
                      else np.asarray(self.sigma, dtype=np.float64))
        if self.mu.shape != (self.n,):
            raise ConfigurationError(f"mu must have shape ({self.n},), got {self.mu.shape}")
        if self.sigma.shape != (self.n, self.n):
            raise ConfigurationError(
                f"sigma must have shape ({self.n}, {self.n}), got {self.sigma.shape}"
            )
        if not np.allclose(self.sigma, self.sigma.T):
            raise ConfigurationError("sigma must be symmetric")
        try:
            self._cholesky = np.linalg.cholesky(self.sigma)
        except np.linalg.LinAlgError:
            raise ConfigurationError("sigma must be positive-definite")

        scales = self.scales
        correlation = self.sigma / np.outer(scales, scales)
        self._correlation_cholesky = np.linalg.cholesky(correlation)

    @property
    def scales(self) -> np.ndarray:
        """Marginal standard deviations sqrt(diag(sigma))."""
        return np.sqrt(np.diag(self.sigma))

    @property
    def total_rows(self) -> int:
        return self.t + (self.w_max - 1) * self.t_up

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "t": self.t,
            "t_up": self.t_up,
            "w_max": self.w_max,
            "copula_dof": self.copula_dof,
            "seed": self.seed,
            "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
        }


def gaussian_batch(cfg: GenConfig, rows: int, batch_index: int = 0) -> np.ndarray:
    """Rows from N(mu, sigma) through the Cholesky factor of sigma."""
    Z = _rng(cfg.seed, _BATCH_STREAM, batch_index).standard_normal((rows, cfg.n))
    return cfg.mu + Z @ cfg._cholesky.T


def _student_sample(cfg: GenConfig, rows: int, batch_index: int) -> np.ndarray:
    """Multivariate t rows Y = Z / sqrt(W / dof) with Z correlated by sigma's correlation."""
    rng = _rng(cfg.seed, _BATCH_STREAM, batch_index)
    Z = rng.standard_normal((rows, cfg.n)) @ cfg._correlation_cholesky.T
    W = rng.chisquare(cfg.copula_dof, size=rows)
    return Z / np.sqrt(W / cfg.copula_dof)[:, np.newaxis]


def tcopula_uniforms(cfg: GenConfig, rows: int, batch_index: int = 1) -> np.ndarray:
    """Copula sample U = T_dof(Y) in (0, 1)^n."""
    return stats.t.cdf(_student_sample(cfg, rows, batch_index), cfg.copula_dof)


def _gaussian_scores(Y: np.ndarray, dof: float) -> Tuple[np.ndarray, np.ndarray]:
    lower = special.ndtri(stats.t.cdf(Y, dof))
    upper = -special.ndtri(stats.t.sf(Y, dof))
    return lower, upper


def tcopula_batch(cfg: GenConfig, rows: int, batch_index: int = 1) -> np.ndarray:
    """Rows with t-copula dependence and the Gaussian marginals N(mu_i, sigma_ii).

    The upper half of Y goes through the survival function so that the
    quantile transform never sees U rounded to 1.
    """
    Y = _student_sample(cfg, rows, batch_index)
    lower, upper = _gaussian_scores(Y, cfg.copula_dof)
    scores = np.where(Y > 0, upper, lower)
    return cfg.mu + cfg.scales * scores


def experiment_stream(cfg: GenConfig) -> Iterator[np.ndarray]:
    """One Gaussian window of t rows, then w_max - 1 t-copula batches of t_up rows."""
    logger.debug("Generating %d windows (n=%d, t=%d, t_up=%d, seed=%d)",
                 cfg.w_max, cfg.n, cfg.t, cfg.t_up, cfg.seed)
    yield gaussian_batch(cfg, cfg.t, 0)
    for w in range(1, cfg.w_max):
        yield tcopula_batch(cfg, cfg.t_up, w)
