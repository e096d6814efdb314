"""Acceptance suite.

Criteria 1-8 are fast property checks.  Criteria 9-12 reproduce the
desk-scale quantitative comparison on the bundled benchmark subset
(data/benchmark): full hyperparameter grid N in {50..500 step 50},
lambda in 2^{-10..5}, kappa in {1,3,5,7}, 4-fold stratified CV, accuracies
averaged over 5 independent initializations.  Expect the quantitative part
to take minutes; one pass/fail line prints per criterion (visible with
``pytest -s``).
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

import intrvfl as iv
from intrvfl.encoding import materialize_level
from intrvfl.integer_net import hidden_batch, preclip_batch
from intrvfl.readout import GaConfig

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "benchmark"
JOBS = int(os.environ.get("INTRVFL_JOBS", str(min(4, os.cpu_count() or 1))))


def scoreboard(message: str) -> None:
    """One line per criterion on the real stdout, bypassing capture."""
    print(message, file=sys.__stdout__, flush=True)


def check(criterion: int, description: str, body) -> None:
    try:
        body()
    except Exception:
        scoreboard(f"criterion {criterion:>2}: FAIL  {description}")
        raise
    scoreboard(f"criterion {criterion:>2}: PASS  {description}")


# ---------------------------------------------------------------------------
# 1-8: property suite
# ---------------------------------------------------------------------------

def test_criterion_1_density_encoding():
    def body():
        for n in range(1, 65):
            codes = np.stack([materialize_level(v, n) for v in range(n + 1)])
            assert len({tuple(c) for c in codes}) == n + 1
            hamming = (codes[:, None, :] != codes[None, :, :]).sum(axis=2)
            levels = np.arange(n + 1)
            assert np.array_equal(hamming, np.abs(levels[:, None] - levels[None, :]))
            for v in range(n):
                changed = np.flatnonzero(codes[v] != codes[v + 1])
                assert changed.tolist() == [v]

    check(1, "density codes: N+1 values, Hamming = level gap, prefix adjacency", body)


def test_criterion_2_shortcut_equivalence():
    def body():
        rng = np.random.default_rng(2024)
        for _ in range(10_000):
            n = int(rng.integers(1, 65))
            k = int(rng.integers(1, 17))
            kappa = int(rng.integers(1, 8))
            proj = iv.generate_bipolar(n, k, seed=int(rng.integers(1 << 31)))
            levels = rng.integers(0, n + 1, size=k)
            a = iv.hidden_explicit(levels, proj, kappa).values
            b = iv.hidden_shortcut(levels, proj, kappa).values
            assert np.array_equal(a, b)

    check(2, "sign-flip shortcut bit-identical to explicit path on 10^4 instances", body)


def test_criterion_3_range_parity_bits():
    def body():
        # exhaustive small cases
        for k in range(1, 6):
            for kappa in range(1, 5):
                proj = iv.generate_bipolar(8, k, seed=k * 7 + kappa)
                all_levels = np.stack(np.meshgrid(
                    *[np.arange(0, 9, 4)] * k, indexing="ij")).reshape(k, -1).T
                pre = preclip_batch(all_levels, proj)
                assert pre.min() >= -k and pre.max() <= k
                assert np.all((pre - k) % 2 == 0)
                post = hidden_batch(all_levels, proj, kappa)
                assert post.min() >= -kappa and post.max() <= kappa
                bits = int(np.ceil(np.log2(2 * kappa + 1)))
                assert len(np.unique(post)) <= 2 * kappa + 1
                assert -(2 ** (bits - 1)) <= -kappa and kappa <= 2 ** (bits - 1) - 1
        # randomized
        rng = np.random.default_rng(3)
        for _ in range(300):
            n = int(rng.integers(1, 65))
            k = int(rng.integers(1, 17))
            kappa = int(rng.integers(1, 8))
            proj = iv.generate_bipolar(n, k, seed=int(rng.integers(1 << 31)))
            levels = rng.integers(0, n + 1, size=(20, k))
            pre = preclip_batch(levels, proj)
            assert pre.min() >= -k and pre.max() <= k
            assert np.all((pre - k) % 2 == 0)
            post = np.clip(pre, -kappa, kappa)
            assert post.min() >= -kappa and post.max() <= kappa

    check(3, "pre-clip sums in [-K, K] with K's parity; activations fit "
             "ceil(log2(2*kappa+1)) bits", body)


def test_criterion_4_ridge_oracle():
    def body():
        rng = np.random.default_rng(4)
        for _ in range(100):
            m = int(rng.integers(5, 51))
            n = int(rng.integers(2, 21))
            l = int(rng.integers(2, 6))
            h = rng.normal(size=(m, n)) * rng.uniform(0.5, 3.0)
            y = rng.normal(size=(m, l))
            lam = float(2.0 ** rng.integers(-10, 6))
            got = iv.solve_ridge(h, y, lam).weights.T
            oracle = np.linalg.inv(h.T @ h + lam * np.eye(n)) @ (h.T @ y)
            rel = np.linalg.norm(got - oracle) / np.linalg.norm(oracle)
            assert rel <= 1e-8
        h = rng.normal(size=(40, 12))
        y = rng.normal(size=(40, 3))
        norms = [np.linalg.norm(iv.solve_ridge(h, y, 2.0**k).weights)
                 for k in range(-10, 6)]
        assert all(a >= b for a, b in zip(norms, norms[1:]))

    check(4, "ridge matches inverse-based oracle on 100 systems; shrinkage "
             "monotone in lambda", body)


def test_criterion_5_quantization():
    def body():
        rng = np.random.default_rng(5)
        for _ in range(200):
            w = rng.normal(size=(int(rng.integers(2, 6)), int(rng.integers(2, 40))))
            w *= rng.uniform(0.01, 100)
            boundary = int(rng.integers(1, 32))
            q = iv.quantize_readout(w, boundary)
            assert np.abs(q.scale * q.weights - w).max() <= q.scale / 2 + 1e-12
        for _ in range(1_000):
            n = int(rng.integers(2, 50))
            l = int(rng.integers(2, 6))
            kappa = int(rng.integers(1, 8))
            boundary = int(rng.integers(1, 16))
            hidden = rng.integers(-kappa, kappa + 1, size=n)
            weights = rng.integers(-boundary, boundary + 1, size=(l, n))
            scale = float(rng.uniform(1e-6, 10))
            int_scores = weights.astype(np.int64) @ hidden
            dequantized = scale * int_scores.astype(np.float64)
            assert int(np.argmax(int_scores)) == int(np.argmax(dequantized))
            # scoring with the scaled float matrix accumulates differently,
            # but integer score gaps are >= 1, far above its rounding error
            top = np.sort(int_scores)[-2:]
            if top[1] > top[0]:
                float_scores = (scale * weights) @ hidden.astype(np.float64)
                assert int(np.argmax(int_scores)) == int(np.argmax(float_scores))

    check(5, "reconstruction within half a step; integer and dequantized "
             "argmax agree on 10^3 models", body)


def test_criterion_6_genetic_search():
    def body():
        rng = np.random.default_rng(6)
        hidden = rng.integers(-3, 4, size=(24, 10))
        weights_true = rng.normal(size=(3, 10))
        labels = np.argmax(hidden @ weights_true.T, axis=1)
        labels[:3] = [0, 1, 2]

        def cost_of(readout):
            return iv.glvq_cost(hidden @ readout.weights.T, labels)

        # best-so-far cost is non-increasing in the generation count
        costs = [cost_of(iv.ga_refine(None, hidden, labels, 2,
                                      GaConfig(population=16, generations=g, seed=9)))
                 for g in range(0, 13, 2)]
        assert all(a >= b for a, b in zip(costs, costs[1:]))

        # boundary clamping under aggressive mutation, several seeds
        for seed in range(5):
            cfg = GaConfig(population=12, generations=20, mutation_rate=0.4, seed=seed)
            out = iv.ga_refine(None, hidden, labels, 1, cfg)
            assert np.abs(out.weights).max() <= 1

        # generations=0 returns the initial readout unchanged
        init = iv.IntReadout(rng.integers(-2, 3, size=(3, 10)), boundary=2)
        out = iv.ga_refine(init, hidden, labels, 2, GaConfig(generations=0, seed=1))
        assert np.array_equal(out.weights, init.weights)

        # seed determinism
        cfg = GaConfig(population=14, generations=15, seed=33)
        a = iv.ga_refine(init, hidden, labels, 2, cfg)
        b = iv.ga_refine(init, hidden, labels, 2, cfg)
        assert np.array_equal(a.weights, b.weights)
        assert cost_of(a) <= cost_of(init)

    check(6, "genetic search: monotone best cost, clamped boundaries, "
             "zero-generation identity, seed determinism", body)


def test_criterion_7_no_leakage():
    def body():
        from intrvfl.data import apply_normalizer, fit_normalizer, one_hot
        from intrvfl.models import build_network

        rng = np.random.default_rng(7)
        features = rng.normal(size=(80, 4))
        labels = (features[:, 0] + features[:, 1] > 0).astype(int)
        labels[:2] = [0, 1]
        ds = iv.Dataset(features, labels, 2, name="leak")
        folds = iv.make_folds(ds, 4, seed=1)
        spec = iv.ModelSpec(family="intrvfl", n_hidden=30, ridge_lambda=0.5, kappa=3)

        def fit_fold(data, fold):
            tr = folds.train_indices(fold)
            norm = fit_normalizer(data[tr])
            network = build_network(spec, 4, projection_seed=55)
            h = network.hidden_batch(apply_normalizer(norm, data[tr]))
            readout = iv.solve_ridge(h.astype(float), one_hot(labels[tr], 2), 0.5)
            return norm, readout

        for fold in range(4):
            te = folds.test_indices(fold)
            for scale in (1e-6, 1.0, 1e6):
                corrupted = features.copy()
                corrupted[te] += scale * rng.normal(size=(te.size, 4))
                norm_a, read_a = fit_fold(features, fold)
                norm_b, read_b = fit_fold(corrupted, fold)
                assert np.array_equal(norm_a.minimum, norm_b.minimum)
                assert np.array_equal(norm_a.maximum, norm_b.maximum)
                assert np.array_equal(read_a.weights, read_b.weights)

    check(7, "perturbing test-fold values changes neither normalizer nor readout", body)


def test_criterion_8_cost_model():
    def body():
        rng = np.random.default_rng(8)
        names = iv.DEFAULT_PROFILE.to_json_dict()
        for _ in range(8):
            profile = iv.CostProfile(**{k: float(rng.uniform(0.1, 25)) for k in names})
            for family, kappa in (("intrvfl", 3), ("rvfl", None)):
                base = iv.count_ops(family, 8, 64, 3, kappa=kappa, profile=profile).total
                assert iv.count_ops(family, 9, 64, 3, kappa=kappa, profile=profile).total >= base
                assert iv.count_ops(family, 8, 65, 3, kappa=kappa, profile=profile).total >= base
                assert iv.count_ops(family, 8, 64, 4, kappa=kappa, profile=profile).total >= base
                budget = float(rng.uniform(1e3, 2e5))
                got = iv.max_hidden_under_budget(family, 8, 3, kappa, profile, budget)
                scan = None
                for n in range(1, 20_000):
                    total = iv.count_ops(family, 8, n, 3, kappa=kappa, profile=profile).total
                    if total <= budget:
                        scan = n
                    else:
                        break
                assert got == scan

    check(8, "cost monotone in N, K, L; budget solver matches exhaustive scan", body)


# ---------------------------------------------------------------------------
# 9-12: desk-scale quantitative reproduction
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def benchmark_report():
    paths = sorted(DATA_DIR.glob("*.csv"))
    assert len(paths) >= 10, "benchmark subset missing; run scripts/make_benchmark_data.py"
    datasets = [iv.load_csv(p) for p in paths]
    assert all(ds.n_samples <= 2000 for ds in datasets)
    report = iv.run_benchmark(
        datasets,
        grid=iv.HyperGrid.desk(n_max=500),
        families=("rvfl", "intrvfl"),
        n_folds=4,
        n_seeds=5,
        base_seed=0,
        sweep_strategies=[("quantized", 1), ("quantized", 15), ("ga-from-quantized", 1)],
        ga=GaConfig(),
        jobs=JOBS,
    )
    assert not report.failures
    return report


def test_criterion_9_accuracy_direction(benchmark_report):
    def body():
        mean_int = benchmark_report.aggregate_mean("intrvfl")
        mean_rvfl = benchmark_report.aggregate_mean("rvfl")
        print(f"    mean accuracy: intrvfl={mean_int:.4f} rvfl={mean_rvfl:.4f}")
        assert mean_int >= mean_rvfl - 0.01

    check(9, "subset mean: integer model within 0.01 of (or above) the baseline", body)


def test_criterion_10_correlation(benchmark_report):
    def body():
        cmp = benchmark_report.comparison("rvfl", "intrvfl")
        print(f"    pearson r = {cmp.pearson_r:.3f}")
        assert cmp.pearson_r is not None
        assert cmp.pearson_r >= 0.6

    check(10, "per-dataset accuracies of the two models correlate (r >= 0.6)", body)


def test_criterion_11_readout_quantization(benchmark_report):
    def body():
        real = benchmark_report.sweep_mean("real")
        q15 = benchmark_report.sweep_mean("quantized:15")
        q1 = benchmark_report.sweep_mean("quantized:1")
        ga1 = benchmark_report.sweep_mean("ga-from-quantized:1")
        gap = real - q1
        recovered = ga1 - q1
        print(f"    real={real:.4f} q15={q15:.4f} q1={q1:.4f} ga1={ga1:.4f} "
              f"gap={gap:.4f} recovered={recovered:.4f}")
        assert abs(q15 - real) <= 0.02
        assert gap >= 0.03
        assert recovered >= gap / 3

    check(11, "5-bit readout within 0.02 of real; 3-level readout degrades and "
              "genetic refinement recovers a third of the gap", body)


def test_criterion_12_cost_ratio():
    def body():
        int_cost = iv.count_ops("intrvfl", n_features=16, n_hidden=512, n_classes=4,
                                kappa=3, boundary=15, profile=iv.DEFAULT_PROFILE)
        real_cost = iv.count_ops("rvfl", n_features=16, n_hidden=512, n_classes=4,
                                 profile=iv.DEFAULT_PROFILE)
        ratio = real_cost.total / int_cost.total
        print(f"    cost ratio rvfl/intrvfl = {ratio:.2f}")
        assert ratio >= 5.0

    check(12, "default profile puts the integer network >= 5x below the baseline", body)
