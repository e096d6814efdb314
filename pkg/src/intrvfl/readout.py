"""Integer readout matrices: direct quantization of the ridge solution and
genetic refinement under a margin-based cost.

Three strategies produce an integer readout with entries in [-B, B]:
rounding the ridge solution onto a symmetric uniform grid, running a
genetic search from random individuals, or running the genetic search
seeded with the quantized ridge solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .ridge import RealReadout

#: denominator guard in the relative margin
MARGIN_EPS = 1e-9


@dataclass(frozen=True)
class IntReadout:
    """(L, N) integer weights with entries in [-boundary, boundary].

    ``scale`` is dequantization metadata only: scale * weights approximates
    the real readout the quantizer started from.  Predictions are invariant
    to it, so the integer path never touches it.
    """

    weights: np.ndarray
    boundary: int
    scale: float = 1.0

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.int64)
        object.__setattr__(self, "weights", weights)
        if self.boundary < 1:
            raise ValueError("boundary must be >= 1")
        if self.scale <= 0:
            raise ValueError("scale must be > 0")
        if weights.size and int(np.abs(weights).max()) > self.boundary:
            raise ValueError(f"weights exceed boundary {self.boundary}")

    @property
    def levels(self) -> int:
        return 2 * self.boundary + 1

    @property
    def bits_per_weight(self) -> int:
        return int(np.ceil(np.log2(self.levels)))

    def dequantized(self) -> np.ndarray:
        return self.scale * self.weights.astype(np.float64)


@dataclass(frozen=True)
class GaConfig:
    """Genetic-search settings.  Defaults are conventional small-scale
    choices; nothing here is principled beyond working well at desk scale."""

    population: int = 50
    generations: int = 100
    mutation_rate: float = 0.05
    elite_fraction: float = 0.1
    tournament_size: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if not 0.0 < self.mutation_rate < 1.0:
            raise ValueError("mutation_rate must be in (0, 1)")
        if not 0.0 <= self.elite_fraction < 1.0:
            raise ValueError("elite_fraction must be in [0, 1)")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")


def quantize_readout(readout, boundary: int) -> IntReadout:
    """Round a real readout onto the symmetric grid {-B, ..., B}.

    The scale ties the grid to the largest magnitude, s = max|w| / B, so a
    boundary weight maps to the boundary level and every in-range entry
    reconstructs to within s/2.  An all-zero readout quantizes to zeros
    with scale 1.
    """
    if boundary < 1:
        raise ValueError("boundary must be >= 1")
    weights = readout.weights if isinstance(readout, RealReadout) else np.asarray(readout)
    weights = weights.astype(np.float64)
    if not np.all(np.isfinite(weights)):
        raise ValueError("readout contains non-finite values")
    max_abs = np.abs(weights).max() if weights.size else 0.0
    if max_abs == 0.0:
        return IntReadout(np.zeros(weights.shape, dtype=np.int64), boundary, scale=1.0)
    scale = max_abs / boundary
    ratio = weights / scale
    quantized = np.sign(ratio) * np.floor(np.abs(ratio) + 0.5)
    quantized = np.clip(quantized, -boundary, boundary).astype(np.int64)
    return IntReadout(quantized, boundary, scale=scale)


def glvq_cost(scores: np.ndarray, labels: np.ndarray) -> float:
    """Margin cost over a labeled set, lower is better.

    For each sample, mu = (runner - true) / (|true| + |runner| + eps) where
    ``true`` is the correct-class score and ``runner`` the best competing
    score; the cost is the sum of logistic(mu).  mu lies in (-1, 1), so the
    per-sample cost lives between logistic(-1) and logistic(+1).
    """
    scores = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.int64)
    if scores.shape[0] != labels.shape[0]:
        raise ValueError("one score row per label required")
    if scores.shape[1] < 2:
        raise ValueError("need at least two classes")
    rows = np.arange(scores.shape[0])
    true_scores = scores[rows, labels]
    masked = scores.copy()
    masked[rows, labels] = -np.inf
    runner = masked.max(axis=1)
    mu = (runner - true_scores) / (np.abs(true_scores) + np.abs(runner) + MARGIN_EPS)
    return float(expit(mu).sum())


def _population_cost(population: np.ndarray, hidden: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """glvq_cost of every individual, via one batched score computation."""
    pop, n_classes, n_hidden = population.shape
    flat = population.reshape(pop * n_classes, n_hidden).astype(np.float64)
    scores = hidden @ flat.T  # (M, pop * L)
    scores = scores.reshape(hidden.shape[0], pop, n_classes)
    return np.array([glvq_cost(scores[:, p, :], labels) for p in range(pop)])


def _mutate(population: np.ndarray, rate: float, boundary: int, rng) -> np.ndarray:
    """Per-gene +-1 steps with the given probability, clamped to the boundary."""
    steps = rng.integers(0, 2, size=population.shape, dtype=np.int64) * 2 - 1
    mask = rng.random(population.shape) < rate
    return np.clip(population + steps * mask, -boundary, boundary)


def ga_refine(
    init: IntReadout | None,
    hidden: np.ndarray,
    labels: np.ndarray,
    boundary: int,
    cfg: GaConfig,
) -> IntReadout:
    """Genetic search over integer readouts with entries in [-B, B].

    ``init`` seeds individual 0 (its siblings are mutated copies); with
    ``init=None`` the whole population is uniform random.  Elitism keeps the
    best individuals verbatim, so the best cost never increases and the
    result is never worse than the initial readout.  Deterministic in
    ``cfg.seed``.
    """
    hidden = np.atleast_2d(np.asarray(hidden, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.int64)
    n_classes = int(labels.max()) + 1
    if n_classes < 2:
        raise ValueError("need at least two classes")
    n_hidden = hidden.shape[1]
    if init is not None:
        if init.boundary != boundary:
            raise ValueError("init boundary does not match requested boundary")
        if init.weights.shape != (n_classes, n_hidden):
            raise ValueError(f"init readout must be ({n_classes}, {n_hidden})")

    rng = np.random.default_rng(cfg.seed)
    shape = (cfg.population, n_classes, n_hidden)
    if init is None:
        population = rng.integers(-boundary, boundary + 1, size=shape, dtype=np.int64)
        scale = 1.0
    else:
        population = np.broadcast_to(init.weights, shape).copy()
        population[1:] = _mutate(population[1:], cfg.mutation_rate, boundary, rng)
        scale = init.scale

    if cfg.generations == 0:
        return IntReadout(population[0].copy(), boundary, scale=scale)

    n_elite = max(1, int(round(cfg.elite_fraction * cfg.population)))
    cost = _population_cost(population, hidden, labels)
    best_idx = int(np.argmin(cost))
    best_weights = population[best_idx].copy()
    best_cost = cost[best_idx]

    for _ in range(cfg.generations):
        order = np.argsort(cost, kind="stable")
        elites = population[order[:n_elite]].copy()
        n_children = cfg.population - n_elite
        children = np.empty((n_children, n_classes, n_hidden), dtype=np.int64)
        for c in range(n_children):
            contestants = rng.integers(0, cfg.population, size=cfg.tournament_size)
            mother = population[contestants[np.argmin(cost[contestants])]]
            contestants = rng.integers(0, cfg.population, size=cfg.tournament_size)
            father = population[contestants[np.argmin(cost[contestants])]]
            take = rng.random((n_classes, n_hidden)) < 0.5
            children[c] = np.where(take, mother, father)
        children = _mutate(children, cfg.mutation_rate, boundary, rng)
        population = np.concatenate([elites, children], axis=0)
        cost = _population_cost(population, hidden, labels)
        gen_best = int(np.argmin(cost))
        if cost[gen_best] < best_cost:
            best_cost = cost[gen_best]
            best_weights = population[gen_best].copy()

    return IntReadout(best_weights, boundary, scale=scale)
