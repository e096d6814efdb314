"""Integer hidden layer: bipolar random projection, binding, bundling, clipping.

The hidden state of one sample is h[n] = clip(sum_k F[n,k] * W[n,k], kappa)
where F is the (never materialized) density-code matrix and W the fixed
bipolar projection.  Because both factors are bipolar, the pre-clip sums are
integers in [-K, K] with the parity of K, and the clipped activations fit in
ceil(log2(2*kappa+1)) bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoding import materialize_features
from .errors import ConfigError

#: accumulator widths a fixed-point build can choose from
ACCUMULATOR_WIDTHS = (8, 16, 32, 64)


@dataclass(frozen=True)
class BipolarProjection:
    """Fixed random (N, K) matrix with entries drawn equiprobably from {-1, +1}.

    Fully determined by (n_hidden, n_features, seed); never serialized,
    always regenerated from the seed.
    """

    matrix: np.ndarray
    seed: int

    @property
    def n_hidden(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class HiddenState:
    """Clipped integer activations of one sample: values in [-kappa, kappa]."""

    values: np.ndarray
    kappa: int

    @property
    def n_hidden(self) -> int:
        return self.values.shape[0]

    @property
    def storage_bits(self) -> int:
        """Bits needed to store one neuron's 2*kappa+1 possible values."""
        return math.ceil(math.log2(2 * self.kappa + 1))


def generate_bipolar(n_hidden: int, n_features: int, seed: int) -> BipolarProjection:
    """Draw an (N, K) bipolar matrix, deterministic in the seed."""
    if n_hidden < 1 or n_features < 1:
        raise ValueError("projection dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    matrix = (rng.integers(0, 2, size=(n_hidden, n_features), dtype=np.int8) * 2 - 1)
    return BipolarProjection(matrix=matrix, seed=seed)


def clip(values, kappa: int):
    """Saturating nonlinearity: -kappa below, +kappa above, identity between."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    return np.clip(values, -kappa, kappa)


def _check_levels(levels: np.ndarray, proj: BipolarProjection) -> np.ndarray:
    levels = np.asarray(levels, dtype=np.int64)
    if levels.shape[-1] != proj.n_features:
        raise ValueError(
            f"expected {proj.n_features} feature levels, got {levels.shape[-1]}"
        )
    if levels.size and (levels.min() < 0 or levels.max() > proj.n_hidden):
        raise ValueError(f"levels outside [0, {proj.n_hidden}]")
    return levels


def hidden_explicit(levels: np.ndarray, proj: BipolarProjection, kappa: int) -> HiddenState:
    """Reference path: materialize the code matrix, bind, bundle, clip.

    Kept permanently as the oracle the shortcut path is tested against.
    """
    levels = _check_levels(levels, proj)
    codes = materialize_features(levels, proj.n_hidden)
    bound = codes.astype(np.int32) * proj.matrix.astype(np.int32)
    pre = bound.sum(axis=1)
    return HiddenState(values=clip(pre, kappa), kappa=kappa)


def hidden_shortcut(levels: np.ndarray, proj: BipolarProjection, kappa: int) -> HiddenState:
    """Production path: use each level as a sign-flip indicator on the
    projection column, skipping the code matrix entirely.  Bit-identical to
    :func:`hidden_explicit`."""
    levels = _check_levels(levels, proj)
    flipped = proj.matrix.astype(np.int32, copy=True)
    for k, v in enumerate(levels):
        flipped[:v, k] = -flipped[:v, k]
    pre = flipped.sum(axis=1)
    return HiddenState(values=clip(pre, kappa), kappa=kappa)


def preclip_batch(levels: np.ndarray, proj: BipolarProjection) -> np.ndarray:
    """Pre-clip sums for a batch: (M, K) levels -> (M, N) integer sums.

    Shared by every kappa value of a sweep, since clipping is elementwise.
    """
    levels = _check_levels(np.atleast_2d(levels), proj)
    n_hidden = proj.n_hidden
    rows = np.arange(n_hidden)
    base = proj.matrix.sum(axis=1, dtype=np.int32)
    pre = np.broadcast_to(base, (levels.shape[0], n_hidden)).astype(np.int32, copy=True)
    for k in range(proj.n_features):
        column = proj.matrix[:, k].astype(np.int32)
        flip = rows[None, :] < levels[:, k, None]
        pre -= 2 * (column[None, :] * flip)
    return pre


def hidden_batch(levels: np.ndarray, proj: BipolarProjection, kappa: int) -> np.ndarray:
    """Clipped hidden states for a batch of samples: (M, N) integers."""
    return clip(preclip_batch(levels, proj), kappa)


def score_bound(n_hidden: int, kappa: int, max_abs_weight: int) -> int:
    """Largest possible |score| of the integer readout: N * kappa * max|w|."""
    return int(n_hidden) * int(kappa) * int(max_abs_weight)


def required_accumulator_bits(bound: int) -> int:
    """Smallest signed two's-complement width holding every value in [-bound, bound]."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if bound == 0:
        return 1
    return math.ceil(math.log2(bound + 1)) + 1


def select_accumulator_bits(bound: int, available=ACCUMULATOR_WIDTHS) -> int:
    """Pick the narrowest available accumulator for a score bound.

    Raises ConfigError when no available width can hold the bound, so a
    model that would silently wrap is rejected at build time.
    """
    needed = required_accumulator_bits(bound)
    for width in sorted(available):
        if width >= needed:
            return width
    raise ConfigError(
        f"score bound {bound} needs {needed}-bit accumulation; "
        f"available widths are {tuple(sorted(available))}"
    )


def forward_int(
    levels: np.ndarray,
    proj: BipolarProjection,
    kappa: int,
    readout: np.ndarray,
) -> tuple[np.ndarray, int]:
    """Exact integer forward pass for one sample.

    Returns the (L,) integer score vector and the predicted class (argmax,
    ties broken toward the lowest class index).  The readout must be an
    integer matrix; the score bound is validated against the accumulator
    before any arithmetic happens.
    """
    readout = np.asarray(readout)
    if not np.issubdtype(readout.dtype, np.integer):
        raise ValueError("forward_int needs an integer readout matrix")
    if readout.ndim != 2 or readout.shape[1] != proj.n_hidden:
        raise ValueError(f"readout must be (L, {proj.n_hidden})")
    max_w = int(np.abs(readout).max()) if readout.size else 0
    select_accumulator_bits(score_bound(proj.n_hidden, kappa, max_w))
    state = hidden_shortcut(levels, proj, kappa)
    scores = readout.astype(np.int64) @ state.values.astype(np.int64)
    return scores, int(np.argmax(scores))
