import math

import numpy as np
import pytest

from intrvfl import RealProjection, forward_real, generate_real, hidden_sigmoid
from intrvfl.baseline_net import hidden_sigmoid_batch


def sigmoid_scalar(t):
    return 1.0 / (1.0 + math.exp(-t))


class TestGenerateReal:
    def test_ranges(self):
        proj = generate_real(100, 20, seed=4)
        assert proj.weights.min() >= -1.0 and proj.weights.max() <= 1.0
        assert proj.bias.min() >= -0.1 and proj.bias.max() <= 0.1

    def test_deterministic(self):
        a = generate_real(8, 3, seed=31)
        b = generate_real(8, 3, seed=31)
        assert np.array_equal(a.weights, b.weights)
        assert np.array_equal(a.bias, b.bias)

    def test_mean_concentrates(self):
        proj = generate_real(1000, 100, seed=6)  # N*K = 1e5
        assert abs(proj.weights.mean()) < 0.02


class TestHiddenSigmoid:
    def test_zero_preactivation_gives_half(self):
        proj = RealProjection(weights=np.zeros((3, 2)), bias=np.zeros(3), seed=0)
        out = hidden_sigmoid(np.array([0.4, 0.9]), proj)
        assert out.tolist() == [0.5, 0.5, 0.5]

    def test_saturation(self):
        proj = RealProjection(weights=np.full((1, 1), 50.0), bias=np.zeros(1), seed=0)
        out = hidden_sigmoid(np.array([1.0]), proj)
        assert abs(out[0] - 1.0) < 1e-15

    def test_outputs_strictly_inside_unit_interval(self):
        proj = generate_real(64, 5, seed=10)
        rng = np.random.default_rng(0)
        out = hidden_sigmoid_batch(rng.random((30, 5)), proj)
        assert np.all(out > 0.0) and np.all(out < 1.0)

    def test_matches_scalar_recomputation(self):
        proj = generate_real(7, 4, seed=42)
        rng = np.random.default_rng(1)
        x = rng.random(4)
        got = hidden_sigmoid(x, proj)
        for n in range(7):
            pre = sum(proj.weights[n, k] * x[k] for k in range(4)) + proj.bias[n]
            assert got[n] == pytest.approx(sigmoid_scalar(pre), abs=1e-12)

    def test_batch_matches_single(self):
        proj = generate_real(9, 3, seed=2)
        rng = np.random.default_rng(5)
        x = rng.random((6, 3))
        batch = hidden_sigmoid_batch(x, proj)
        for m in range(6):
            np.testing.assert_allclose(batch[m], hidden_sigmoid(x[m], proj), atol=1e-15)


class TestForwardReal:
    def test_zero_readout_ties_to_class_zero(self):
        proj = generate_real(5, 2, seed=3)
        scores, pred = forward_real(np.array([0.2, 0.8]), proj, np.zeros((3, 5)))
        assert scores.tolist() == [0.0, 0.0, 0.0]
        assert pred == 0

    def test_selector_rows_return_hidden_values(self):
        proj = generate_real(6, 2, seed=8)
        x = np.array([0.1, 0.7])
        h = hidden_sigmoid(x, proj)
        scores, _ = forward_real(x, proj, np.eye(3, 6))
        np.testing.assert_allclose(scores, h[:3])

    def test_matches_matrix_product_oracle(self):
        rng = np.random.default_rng(9)
        proj = generate_real(10, 3, seed=12)
        readout = rng.normal(size=(4, 10))
        x = rng.random(3)
        scores, pred = forward_real(x, proj, readout)
        expected = np.array([
            sum(readout[l, n] * hidden_sigmoid(x, proj)[n] for n in range(10))
            for l in range(4)
        ])
        np.testing.assert_allclose(scores, expected, atol=1e-12)
        assert pred == int(np.argmax(expected))

    def test_positive_scaling_preserves_argmax(self):
        rng = np.random.default_rng(13)
        proj = generate_real(12, 4, seed=20)
        readout = rng.normal(size=(5, 12))
        x = rng.random(4)
        _, pred = forward_real(x, proj, readout)
        _, pred_scaled = forward_real(x, proj, 3.5 * readout)
        assert pred == pred_scaled
