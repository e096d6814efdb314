"""Density (thermometer) encoding of unit-interval features.

A feature value in [0, 1] is quantized to an integer level v in [0, N] and
represented by a bipolar vector whose v leftmost entries are -1 and whose
remaining N - v entries are +1.  The level alone determines the code, so
codes are stored as levels and only materialized on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def quantize(x, n_dim: int):
    """Quantize unit-interval values to integer levels in [0, n_dim].

    Rounds x * n_dim to the nearest integer, breaking .5 ties away from
    zero.  Scalar in, scalar out; array in, array out.  Values outside
    [0, 1] violate the contract (callers clip first) and raise ValueError.
    """
    if n_dim < 1:
        raise ValueError("n_dim must be >= 1")
    arr = np.asarray(x, dtype=np.float64)
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError("quantize expects values in [0, 1]; clip upstream")
    levels = np.floor(arr * n_dim + 0.5).astype(np.int64)
    if np.isscalar(x) or arr.ndim == 0:
        return int(levels)
    return levels


@dataclass(frozen=True)
class DensityCode:
    """One encoded feature: dimension, level, and a lazily built code."""

    n_dim: int
    level: int

    def __post_init__(self):
        if not 0 <= self.level <= self.n_dim:
            raise ValueError(f"level {self.level} outside [0, {self.n_dim}]")

    def materialize(self) -> np.ndarray:
        """Realize the bipolar vector: -1 for the first ``level`` slots, +1 after."""
        return materialize_level(self.level, self.n_dim)


def materialize_level(level: int, n_dim: int) -> np.ndarray:
    """Bipolar thermometer vector for one level (int8, values in {-1, +1})."""
    if not 0 <= level <= n_dim:
        raise ValueError(f"level {level} outside [0, {n_dim}]")
    code = np.ones(n_dim, dtype=np.int8)
    code[:level] = -1
    return code


def encode(level: int, n_dim: int) -> DensityCode:
    """Wrap a quantized level as a DensityCode."""
    return DensityCode(n_dim=n_dim, level=int(level))


def encode_features(x: np.ndarray, n_dim: int) -> np.ndarray:
    """Quantize a (K,) feature vector or (M, K) matrix to integer levels.

    Returns the levels only; the (N, K) code matrix is redundant for the
    forward pass and exists just for inspection via
    :func:`materialize_features`.
    """
    return np.atleast_1d(quantize(x, n_dim))


def materialize_features(levels: np.ndarray, n_dim: int) -> np.ndarray:
    """Realize the (N, K) bipolar code matrix for one sample's levels.

    Column k is the thermometer code of feature k.  Test/reference path;
    production inference never builds this matrix.
    """
    levels = np.asarray(levels, dtype=np.int64)
    if levels.ndim != 1:
        raise ValueError("levels must be a 1-d vector")
    if levels.size and (levels.min() < 0 or levels.max() > n_dim):
        raise ValueError(f"levels outside [0, {n_dim}]")
    rows = np.arange(n_dim)[:, None]
    return np.where(rows < levels[None, :], -1, 1).astype(np.int8)
