"""Closed-form readout training: regularized least squares on collected
hidden states.

With H the (M, N) hidden-state matrix and Y the (M, L) one-hot targets, the
readout solves (H^T H + lambda I) W^T = H^T Y via a symmetric
positive-definite (Cholesky) factorization; lambda > 0 guarantees the
system is SPD.  The readout is stored as (L, N) to match the forward pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve


@dataclass(frozen=True)
class HiddenMatrix:
    """Hidden states of a training set, one row per sample, plus the
    description of the frozen model that produced them."""

    values: np.ndarray
    source: str = ""

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class RealReadout:
    """Ridge solution: (L, N) real weights and the lambda that produced them."""

    weights: np.ndarray
    ridge_lambda: float

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.weights.shape[1]


def collect_hidden(model, features01: np.ndarray) -> HiddenMatrix:
    """Run the frozen model's hidden layer over normalized training rows.

    ``model`` is any network exposing ``hidden_batch`` (and optionally a
    ``description``); row m of the result is sample m's hidden state.
    """
    values = model.hidden_batch(np.atleast_2d(features01))
    return HiddenMatrix(values=values, source=getattr(model, "description", ""))


def gram_matrices(hidden: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Precompute H^T H and H^T Y once for a sweep over lambda values."""
    h = np.asarray(hidden, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if h.ndim != 2 or y.ndim != 2 or h.shape[0] != y.shape[0]:
        raise ValueError("hidden and targets must be (M, N) and (M, L)")
    if not np.all(np.isfinite(h)):
        raise ValueError("hidden matrix contains non-finite values")
    return h.T @ h, h.T @ y


def solve_from_grams(gram: np.ndarray, moment: np.ndarray, ridge_lambda: float) -> np.ndarray:
    """Solve (gram + lambda I) W^T = moment; returns W^T with shape (N, L).

    Finiteness was already checked when the grams were built, so the
    factorization skips re-validation; the copied system is factored in
    place.
    """
    if ridge_lambda <= 0:
        raise ValueError("ridge_lambda must be > 0")
    system = gram.copy()
    system[np.diag_indices_from(system)] += ridge_lambda
    factor = cho_factor(system, lower=True, overwrite_a=True, check_finite=False)
    return cho_solve(factor, moment, check_finite=False)


def solve_ridge(hidden, targets: np.ndarray, ridge_lambda: float) -> RealReadout:
    """Train the readout on hidden states (HiddenMatrix or (M, N) array).

    Integer hidden states are converted to floats for the solve; the
    integer story concerns inference, not training.
    """
    values = hidden.values if isinstance(hidden, HiddenMatrix) else hidden
    gram, moment = gram_matrices(values, targets)
    weights_t = solve_from_grams(gram, moment, ridge_lambda)
    return RealReadout(weights=weights_t.T, ridge_lambda=float(ridge_lambda))
