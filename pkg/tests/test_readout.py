import math

import numpy as np
import pytest

from intrvfl import GaConfig, IntReadout, ga_refine, glvq_cost, quantize_readout
from intrvfl.readout import _mutate
from intrvfl.ridge import RealReadout


class TestQuantizeReadout:
    def test_unit_weights_at_boundary_one(self):
        readout = quantize_readout(np.array([[-1.0, 0.0, 1.0]]), boundary=1)
        assert readout.weights.tolist() == [[-1, 0, 1]]
        assert readout.scale == 1.0

    def test_boundary_maps_to_boundary(self):
        readout = quantize_readout(np.array([[0.8, 0.1]]), boundary=15)
        assert readout.scale == pytest.approx(0.8 / 15)
        assert readout.weights[0, 0] == 15

    def test_reconstruction_error_within_half_step(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            w = rng.normal(size=(4, 20)) * rng.uniform(0.1, 10)
            q = quantize_readout(w, boundary=15)
            err = np.abs(q.scale * q.weights - w)
            assert err.max() <= q.scale / 2 + 1e-12

    def test_all_zero_readout(self):
        q = quantize_readout(np.zeros((2, 5)), boundary=7)
        assert np.all(q.weights == 0)
        assert q.scale == 1.0

    def test_levels_and_bits(self):
        q = quantize_readout(np.ones((1, 2)), boundary=15)
        assert q.levels == 31
        assert q.bits_per_weight == 5

    def test_accepts_real_readout_wrapper(self):
        real = RealReadout(weights=np.array([[0.5, -0.25]]), ridge_lambda=1.0)
        q = quantize_readout(real, boundary=2)
        assert q.weights.tolist() == [[2, -1]]

    def test_entries_never_exceed_boundary(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            q = quantize_readout(rng.normal(size=(3, 8)), boundary=3)
            assert np.abs(q.weights).max() <= 3


class TestGlvqCost:
    def test_single_sample_value(self):
        # mu = (1 - 3) / (3 + 1 + eps) = -0.5; logistic(-0.5) = 0.377540...
        cost = glvq_cost(np.array([[3.0, 1.0]]), np.array([0]))
        assert cost == pytest.approx(0.3775406687981454, abs=1e-9)

    def test_tied_scores_give_half_per_sample(self):
        scores = np.tile([2.0, 2.0, 0.0], (8, 1))
        cost = glvq_cost(scores, np.zeros(8, dtype=int))
        assert cost == pytest.approx(4.0, abs=1e-9)

    def test_separated_scores_approach_lower_limit(self):
        # with true >> runner the margin saturates at -1, so the
        # per-sample cost floors at logistic(-1)
        scores = np.tile([100.0, -100.0], (10, 1))
        cost = glvq_cost(scores, np.zeros(10, dtype=int))
        floor = 10 * (1.0 / (1.0 + math.exp(1.0)))
        assert cost == pytest.approx(floor, rel=1e-9)

    def test_bounded_by_sample_count(self):
        rng = np.random.default_rng(13)
        scores = rng.normal(size=(50, 4))
        labels = rng.integers(0, 4, size=50)
        cost = glvq_cost(scores, labels)
        assert 0.0 < cost < 50.0

    def test_lower_cost_for_better_separation(self):
        labels = np.array([0, 1])
        weak = np.array([[1.0, 0.9], [0.9, 1.0]])
        strong = np.array([[5.0, 0.1], [0.1, 5.0]])
        assert glvq_cost(strong, labels) < glvq_cost(weak, labels)


def _toy_problem(seed=0, m=20, n=8, l=2):
    rng = np.random.default_rng(seed)
    hidden = rng.integers(-3, 4, size=(m, n))
    labels = rng.integers(0, l, size=m)
    # ensure both classes appear
    labels[0], labels[1] = 0, 1
    return hidden, labels


class TestGaRefine:
    def test_zero_generations_returns_init(self):
        hidden, labels = _toy_problem()
        init = IntReadout(np.zeros((2, 8), dtype=np.int64), boundary=1)
        cfg = GaConfig(generations=0, seed=5)
        out = ga_refine(init, hidden, labels, 1, cfg)
        assert np.array_equal(out.weights, init.weights)

    def test_never_worse_than_init(self):
        hidden, labels = _toy_problem(seed=3)
        rng = np.random.default_rng(4)
        init = IntReadout(rng.integers(-1, 2, size=(2, 8)), boundary=1)
        init_cost = glvq_cost(hidden @ init.weights.T, labels)
        cfg = GaConfig(population=20, generations=30, seed=6)
        out = ga_refine(init, hidden, labels, 1, cfg)
        out_cost = glvq_cost(hidden @ out.weights.T, labels)
        assert out_cost <= init_cost

    def test_weights_stay_in_boundary(self):
        hidden, labels = _toy_problem(seed=7)
        cfg = GaConfig(population=16, generations=25, mutation_rate=0.3, seed=8)
        out = ga_refine(None, hidden, labels, 2, cfg)
        assert np.abs(out.weights).max() <= 2

    def test_mutation_clamps(self):
        rng = np.random.default_rng(9)
        pop = np.full((5, 2, 6), 2, dtype=np.int64)
        mutated = _mutate(pop, rate=1.0, boundary=2, rng=rng)
        assert np.abs(mutated).max() <= 2

    def test_deterministic_in_seed(self):
        hidden, labels = _toy_problem(seed=10)
        cfg = GaConfig(population=12, generations=15, seed=99)
        a = ga_refine(None, hidden, labels, 1, cfg)
        b = ga_refine(None, hidden, labels, 1, cfg)
        assert np.array_equal(a.weights, b.weights)

    def test_quantized_init_beats_random_init_on_average(self):
        # tiny instance; mirrors the observed ordering of the two
        # initialization strategies
        from intrvfl.ridge import solve_ridge
        from intrvfl.data import one_hot

        rng = np.random.default_rng(20)
        hidden = rng.integers(-3, 4, size=(20, 8))
        weights_true = rng.normal(size=(2, 8))
        labels = np.argmax(hidden @ weights_true.T, axis=1)
        labels[:2] = [0, 1]
        real = solve_ridge(hidden.astype(float), one_hot(labels, 2), 0.5)

        def train_accuracy(readout):
            return np.mean(np.argmax(hidden @ readout.weights.T, axis=1) == labels)

        from_quantized, from_random = [], []
        for seed in range(10):
            cfg = GaConfig(population=20, generations=200, seed=seed)
            init = quantize_readout(real, boundary=1)
            from_quantized.append(train_accuracy(ga_refine(init, hidden, labels, 1, cfg)))
            from_random.append(train_accuracy(ga_refine(None, hidden, labels, 1, cfg)))
        assert np.mean(from_quantized) >= np.mean(from_random)


class TestIntReadoutValidation:
    def test_rejects_out_of_boundary_weights(self):
        with pytest.raises(ValueError, match="exceed"):
            IntReadout(np.array([[3]]), boundary=2)

    def test_rejects_bad_scale(self):
        with pytest.raises(ValueError, match="scale"):
            IntReadout(np.array([[1]]), boundary=2, scale=0.0)


class TestGaConfigValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(population=1),
        dict(mutation_rate=0.0),
        dict(mutation_rate=1.0),
        dict(elite_fraction=1.0),
        dict(generations=-1),
        dict(tournament_size=0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GaConfig(**kwargs)
