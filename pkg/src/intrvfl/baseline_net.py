"""Conventional RVFL hidden layer: real uniform projection, bias, sigmoid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

#: uniform ranges for the random projection and the bias vector
WEIGHT_RANGE = (-1.0, 1.0)
BIAS_RANGE = (-0.1, 0.1)


@dataclass(frozen=True)
class RealProjection:
    """Fixed random (N, K) weights in [-1, 1] and (N,) biases in [-0.1, 0.1].

    Fully determined by (n_hidden, n_features, seed); regenerated from the
    seed rather than serialized.
    """

    weights: np.ndarray
    bias: np.ndarray
    seed: int

    @property
    def n_hidden(self) -> int:
        return self.weights.shape[0]

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def generate_real(n_hidden: int, n_features: int, seed: int) -> RealProjection:
    """Draw the projection and bias uniformly, deterministic in the seed."""
    if n_hidden < 1 or n_features < 1:
        raise ValueError("projection dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(*WEIGHT_RANGE, size=(n_hidden, n_features))
    bias = rng.uniform(*BIAS_RANGE, size=n_hidden)
    return RealProjection(weights=weights, bias=bias, seed=seed)


def hidden_sigmoid(x: np.ndarray, proj: RealProjection) -> np.ndarray:
    """Hidden activations sigmoid(W x + b) for one (K,) sample; values in (0, 1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (proj.n_features,):
        raise ValueError(f"expected a ({proj.n_features},) sample")
    return expit(proj.weights @ x + proj.bias)


def hidden_sigmoid_batch(x: np.ndarray, proj: RealProjection) -> np.ndarray:
    """Hidden activations for an (M, K) batch: (M, N) floats in (0, 1)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != proj.n_features:
        raise ValueError(f"expected {proj.n_features} features")
    return expit(x @ proj.weights.T + proj.bias)


def forward_real(
    x: np.ndarray,
    proj: RealProjection,
    readout: np.ndarray,
) -> tuple[np.ndarray, int]:
    """Forward pass for one sample: (L,) scores and the argmax class.

    Ties break toward the lowest class index.
    """
    readout = np.asarray(readout, dtype=np.float64)
    if readout.ndim != 2 or readout.shape[1] != proj.n_hidden:
        raise ValueError(f"readout must be (L, {proj.n_hidden})")
    scores = readout @ hidden_sigmoid(x, proj)
    return scores, int(np.argmax(scores))
