"""Cross-validated grid search, model comparison, and benchmark reports.

The grid sweep shares work aggressively: pre-clip hidden sums are reused
across every kappa, and the normal-equation grams (H^T H, H^T Y) are reused
across every lambda.  Selection ties break toward the cheaper model:
smaller N, then larger lambda, then smaller kappa.
"""

from __future__ import annotations

import csv
import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baseline_net, integer_net
from .costs import DEFAULT_PROFILE, CostProfile, InferenceCost, count_ops
from .data import Dataset, FoldPlan, apply_normalizer, fit_normalizer, make_folds, one_hot
from .encoding import encode_features
from .errors import ConfigError, DataError
from .models import ModelSpec, build_network, fit_readout
from .readout import GaConfig, IntReadout
from .ridge import gram_matrices, solve_from_grams, solve_ridge
from .seeding import derive_seed

DEFAULT_FOLDS = 4
DEFAULT_SEEDS = 5


@dataclass(frozen=True)
class HyperGrid:
    """Search space over hidden size, regularization, and clipping threshold.

    The kappa axis is ignored for the conventional family.
    """

    n_values: tuple[int, ...]
    lambda_values: tuple[float, ...]
    kappa_values: tuple[int, ...] = (1, 3, 5, 7)

    def __post_init__(self):
        if not self.n_values or not self.lambda_values or not self.kappa_values:
            raise ConfigError("grid axes must be non-empty")
        if min(self.n_values) < 1:
            raise ConfigError("hidden sizes must be >= 1")
        if min(self.lambda_values) <= 0:
            raise ConfigError("lambda values must be > 0")

    @classmethod
    def desk(cls, n_max: int = 500) -> "HyperGrid":
        """Desk-scale default: N in 50..n_max step 50, lambda in 2^-10..2^5."""
        return cls(
            n_values=tuple(range(50, n_max + 1, 50)),
            lambda_values=tuple(float(2.0**k) for k in range(-10, 6)),
        )

    @classmethod
    def full(cls) -> "HyperGrid":
        """Full-scale grid: N up to 1500."""
        return cls.desk(n_max=1500)

    def kappa_axis(self, family: str) -> tuple[int, ...]:
        return self.kappa_values if family == "intrvfl" else (0,)


@dataclass(frozen=True)
class CrossValResult:
    """Per-(initialization, fold) accuracies for one model spec."""

    accuracies: np.ndarray
    seeds: tuple[int, ...]

    @property
    def mean(self) -> float:
        return float(self.accuracies.mean())


@dataclass(frozen=True)
class GridSearchResult:
    family: str
    best: ModelSpec
    mean_accuracy: float
    accuracies: np.ndarray          # (n_seeds, n_folds) at the chosen point
    seeds: tuple[int, ...]
    table: np.ndarray               # mean accuracy, shape (nN, nKappa, nLambda)
    grid: HyperGrid


@dataclass(frozen=True)
class ComparisonResult:
    """Per-dataset accuracy pairs of two models plus summary statistics."""

    datasets: tuple[str, ...]
    accuracies_a: np.ndarray
    accuracies_b: np.ndarray
    label_a: str
    label_b: str

    @property
    def mean_a(self) -> float:
        return float(self.accuracies_a.mean())

    @property
    def mean_b(self) -> float:
        return float(self.accuracies_b.mean())

    @property
    def pearson_r(self) -> float | None:
        """Pearson correlation, or None when undefined (n < 2 or zero variance)."""
        if self.accuracies_a.size < 2:
            return None
        da = self.accuracies_a - self.accuracies_a.mean()
        db = self.accuracies_b - self.accuracies_b.mean()
        denom = np.sqrt((da ** 2).sum() * (db ** 2).sum())
        if denom == 0.0:
            return None
        return float((da * db).sum() / denom)


def _fold_arrays(dataset: Dataset, folds: FoldPlan, fold: int):
    """Normalized train/test features and targets for one fold (no leakage:
    the normalizer sees training rows only)."""
    tr = folds.train_indices(fold)
    te = folds.test_indices(fold)
    with warnings.catch_warnings():
        warnings.simplefilter("once", UserWarning)
        norm = fit_normalizer(dataset.features[tr])
    x_tr = apply_normalizer(norm, dataset.features[tr])
    x_te = apply_normalizer(norm, dataset.features[te])
    return x_tr, dataset.labels[tr], x_te, dataset.labels[te]


def _accuracy(scores: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(np.argmax(scores, axis=1) == labels))


def cross_validate(
    spec: ModelSpec,
    dataset: Dataset,
    folds: FoldPlan,
    n_seeds: int = DEFAULT_SEEDS,
    base_seed: int = 0,
) -> CrossValResult:
    """Accuracy of a fixed spec under stratified CV, averaged over
    independent random initializations.

    Per fold and seed: the normalizer and readout are fit on the training
    fold only, then scored on the held-out fold.
    """
    if n_seeds < 1:
        raise ConfigError("n_seeds must be >= 1")
    seeds = tuple(derive_seed(base_seed, "projection", i) for i in range(n_seeds))
    acc = np.zeros((n_seeds, folds.n_folds))
    for si, pseed in enumerate(seeds):
        network = build_network(spec, dataset.n_features, pseed)
        for f in range(folds.n_folds):
            x_tr, y_tr, x_te, y_te = _fold_arrays(dataset, folds, f)
            h_tr = network.hidden_batch(x_tr).astype(np.float64)
            real = solve_ridge(h_tr, one_hot(y_tr, dataset.n_classes), spec.ridge_lambda)
            readout = fit_readout(spec, real, h_tr, y_tr,
                                  ga_seed=derive_seed(base_seed, "ga", si, f))
            h_te = network.hidden_batch(x_te).astype(np.float64)
            acc[si, f] = _accuracy(h_te @ readout.weights.T.astype(np.float64), y_te)
    return CrossValResult(accuracies=acc, seeds=seeds)


def _grid_accuracy_for_seed(
    dataset: Dataset,
    family: str,
    grid: HyperGrid,
    folds: FoldPlan,
    projection_seed: int,
) -> np.ndarray:
    """Accuracy of every grid point for one initialization.

    Returns shape (nN, nKappa, nLambda, n_folds); the kappa axis has
    length 1 for the conventional family.
    """
    kappas = grid.kappa_axis(family)
    acc = np.zeros((len(grid.n_values), len(kappas), len(grid.lambda_values), folds.n_folds))
    for f in range(folds.n_folds):
        x_tr, y_tr, x_te, y_te = _fold_arrays(dataset, folds, f)
        targets = one_hot(y_tr, dataset.n_classes)
        for i_n, n_hidden in enumerate(grid.n_values):
            if family == "intrvfl":
                proj = integer_net.generate_bipolar(n_hidden, dataset.n_features, projection_seed)
                pre_tr = integer_net.preclip_batch(encode_features(x_tr, n_hidden), proj)
                pre_te = integer_net.preclip_batch(encode_features(x_te, n_hidden), proj)
                for i_k, kappa in enumerate(kappas):
                    h_tr = integer_net.clip(pre_tr, kappa).astype(np.float64)
                    h_te = integer_net.clip(pre_te, kappa).astype(np.float64)
                    gram, moment = gram_matrices(h_tr, targets)
                    for i_l, lam in enumerate(grid.lambda_values):
                        weights_t = solve_from_grams(gram, moment, lam)
                        acc[i_n, i_k, i_l, f] = _accuracy(h_te @ weights_t, y_te)
            else:
                proj = baseline_net.generate_real(n_hidden, dataset.n_features, projection_seed)
                h_tr = baseline_net.hidden_sigmoid_batch(x_tr, proj)
                h_te = baseline_net.hidden_sigmoid_batch(x_te, proj)
                gram, moment = gram_matrices(h_tr, targets)
                for i_l, lam in enumerate(grid.lambda_values):
                    weights_t = solve_from_grams(gram, moment, lam)
                    acc[i_n, 0, i_l, f] = _accuracy(h_te @ weights_t, y_te)
    return acc


def _grid_task(args) -> np.ndarray:
    dataset, family, grid, folds, projection_seed = args
    return _grid_accuracy_for_seed(dataset, family, grid, folds, projection_seed)


def _map_tasks(fn, tasks, jobs: int) -> list:
    """Run tasks in order-preserving fashion, optionally across processes.

    Results are aggregated in task order, so outputs do not depend on the
    worker count.
    """
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _select_best(table: np.ndarray, grid: HyperGrid, kappas: tuple[int, ...]):
    """Highest mean accuracy; ties go to smaller N, then larger lambda,
    then smaller kappa."""
    best_key = None
    best_idx = None
    for i_n, n_hidden in enumerate(grid.n_values):
        for i_k, kappa in enumerate(kappas):
            for i_l, lam in enumerate(grid.lambda_values):
                key = (-table[i_n, i_k, i_l], n_hidden, -lam, kappa)
                if best_key is None or key < best_key:
                    best_key = key
                    best_idx = (i_n, i_k, i_l)
    return best_idx


def grid_search(
    family: str,
    dataset: Dataset,
    grid: HyperGrid,
    folds: FoldPlan,
    n_seeds: int = DEFAULT_SEEDS,
    base_seed: int = 0,
    jobs: int = 1,
) -> GridSearchResult:
    """Exhaustive CV evaluation of the grid for one model family."""
    seeds = tuple(derive_seed(base_seed, "projection", i) for i in range(n_seeds))
    tasks = [(dataset, family, grid, folds, pseed) for pseed in seeds]
    per_seed = np.stack(_map_tasks(_grid_task, tasks, jobs))  # (S, nN, nK, nL, F)
    # reduce each point over its (seeds, folds) slice exactly the way
    # cross_validate does, so the two routes agree bit for bit
    table = np.empty(per_seed.shape[1:4])
    for idx in np.ndindex(*table.shape):
        table[idx] = per_seed[:, idx[0], idx[1], idx[2], :].mean()
    kappas = grid.kappa_axis(family)
    i_n, i_k, i_l = _select_best(table, grid, kappas)
    best = ModelSpec(
        family=family,
        n_hidden=grid.n_values[i_n],
        ridge_lambda=grid.lambda_values[i_l],
        kappa=kappas[i_k] if family == "intrvfl" else None,
    )
    return GridSearchResult(
        family=family,
        best=best,
        mean_accuracy=float(table[i_n, i_k, i_l]),
        accuracies=per_seed[:, i_n, i_k, i_l, :],
        seeds=seeds,
        table=table,
        grid=grid,
    )


def compare_models(rows_a, rows_b, label_a: str = "a", label_b: str = "b") -> ComparisonResult:
    """Pair up per-dataset accuracies of two evaluations.

    ``rows_a``/``rows_b`` map dataset name -> accuracy (or are sequences of
    objects with ``dataset`` and ``mean_accuracy``).  The dataset lists must
    match exactly.
    """
    def as_mapping(rows):
        if isinstance(rows, dict):
            return dict(rows)
        return {r.dataset: r.mean_accuracy for r in rows}

    map_a, map_b = as_mapping(rows_a), as_mapping(rows_b)
    if set(map_a) != set(map_b):
        raise ConfigError(
            f"dataset lists differ: {sorted(map_a)} vs {sorted(map_b)}"
        )
    names = tuple(map_a)
    return ComparisonResult(
        datasets=names,
        accuracies_a=np.array([map_a[n] for n in names], dtype=np.float64),
        accuracies_b=np.array([map_b[n] for n in names], dtype=np.float64),
        label_a=label_a,
        label_b=label_b,
    )


# ---------------------------------------------------------------------------
# readout-strategy sweep (integer readouts at the chosen configuration)
# ---------------------------------------------------------------------------

def _sweep_task(args) -> dict[str, np.ndarray]:
    dataset, base_spec, strategies, folds, base_seed, seed_index, ga = args
    pseed = derive_seed(base_seed, "projection", seed_index)
    network = build_network(base_spec, dataset.n_features, pseed)
    out = {key: np.zeros(folds.n_folds) for key in ["real"] + [k for k, _, _ in strategies]}
    for f in range(folds.n_folds):
        x_tr, y_tr, x_te, y_te = _fold_arrays(dataset, folds, f)
        h_tr = network.hidden_batch(x_tr).astype(np.float64)
        real = solve_ridge(h_tr, one_hot(y_tr, dataset.n_classes), base_spec.ridge_lambda)
        h_te = network.hidden_batch(x_te).astype(np.float64)
        out["real"][f] = _accuracy(h_te @ real.weights.T, y_te)
        for key, mode, boundary in strategies:
            spec = base_spec.with_readout(mode, boundary, ga)
            readout = fit_readout(
                spec, real, h_tr, y_tr,
                ga_seed=derive_seed(base_seed, "ga", seed_index, f, mode, boundary),
            )
            out[key][f] = _accuracy(h_te @ readout.weights.T.astype(np.float64), y_te)
    return out


def evaluate_readout_strategies(
    dataset: Dataset,
    base_spec: ModelSpec,
    strategies: list[tuple[str, int]],
    folds: FoldPlan,
    n_seeds: int = DEFAULT_SEEDS,
    base_seed: int = 0,
    ga: GaConfig | None = None,
    jobs: int = 1,
) -> dict[str, float]:
    """Mean CV accuracy of integer-readout strategies at a fixed config.

    ``strategies`` holds (mode, boundary) pairs; the real-readout arm is
    always included under the key ``"real"``.  Other keys look like
    ``"quantized:15"``.
    """
    keyed = [(f"{mode}:{boundary}", mode, boundary) for mode, boundary in strategies]
    tasks = [
        (dataset, base_spec, keyed, folds, base_seed, si, ga)
        for si in range(n_seeds)
    ]
    results = _map_tasks(_sweep_task, tasks, jobs)
    merged: dict[str, float] = {}
    for key in ["real"] + [k for k, _, _ in keyed]:
        merged[key] = float(np.mean([r[key] for r in results]))
    return merged


# ---------------------------------------------------------------------------
# benchmark report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DatasetEval:
    """One dataset x one family: chosen hyperparameters and CV accuracy."""

    dataset: str
    n_samples: int
    n_features: int
    n_classes: int
    family: str
    spec: ModelSpec
    mean_accuracy: float
    fold_accuracies: np.ndarray     # (n_seeds, n_folds)
    seeds: tuple[int, ...]
    cost: InferenceCost | None = None


@dataclass(frozen=True)
class SweepEval:
    dataset: str
    strategy: str                   # e.g. "quantized:15" or "real"
    mean_accuracy: float


@dataclass
class EvalReport:
    """Everything a benchmark run produced, serializable to JSON and CSV."""

    rows: list[DatasetEval] = field(default_factory=list)
    sweep: list[SweepEval] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)
    n_folds: int = DEFAULT_FOLDS
    n_seeds: int = DEFAULT_SEEDS
    base_seed: int = 0

    def families(self) -> list[str]:
        seen = []
        for row in self.rows:
            if row.family not in seen:
                seen.append(row.family)
        return seen

    def family_rows(self, family: str) -> list[DatasetEval]:
        return [r for r in self.rows if r.family == family]

    def aggregate_mean(self, family: str) -> float:
        rows = self.family_rows(family)
        if not rows:
            raise ConfigError(f"no rows for family {family!r}")
        return float(np.mean([r.mean_accuracy for r in rows]))

    def comparison(self, family_a: str, family_b: str) -> ComparisonResult:
        return compare_models(
            self.family_rows(family_a), self.family_rows(family_b),
            label_a=family_a, label_b=family_b,
        )

    def sweep_mean(self, strategy: str) -> float:
        vals = [s.mean_accuracy for s in self.sweep if s.strategy == strategy]
        if not vals:
            raise ConfigError(f"no sweep rows for strategy {strategy!r}")
        return float(np.mean(vals))

    def to_json_dict(self) -> dict:
        out = {
            "config": {
                "n_folds": self.n_folds,
                "n_seeds": self.n_seeds,
                "base_seed": self.base_seed,
                "families": self.families(),
            },
            "datasets": [
                {
                    "dataset": r.dataset,
                    "n_samples": r.n_samples,
                    "n_features": r.n_features,
                    "n_classes": r.n_classes,
                    "family": r.family,
                    "n_hidden": r.spec.n_hidden,
                    "ridge_lambda": r.spec.ridge_lambda,
                    "kappa": r.spec.kappa,
                    "mean_accuracy": r.mean_accuracy,
                    "fold_accuracies": r.fold_accuracies.tolist(),
                    "seeds": list(r.seeds),
                    "cost": r.cost.to_json_dict() if r.cost else None,
                }
                for r in self.rows
            ],
            "aggregate": {
                fam: {"mean_accuracy": self.aggregate_mean(fam)} for fam in self.families()
            },
            "readout_sweep": [
                {"dataset": s.dataset, "strategy": s.strategy, "mean_accuracy": s.mean_accuracy}
                for s in self.sweep
            ],
            "failures": [{"dataset": d, "error": e} for d, e in self.failures],
        }
        fams = self.families()
        if len(fams) == 2:
            cmp = self.comparison(fams[0], fams[1])
            out["comparison"] = {
                "family_a": fams[0],
                "family_b": fams[1],
                "mean_a": cmp.mean_a,
                "mean_b": cmp.mean_b,
                "pearson_r": cmp.pearson_r,
                "pairs": [
                    [name, float(a), float(b)]
                    for name, a, b in zip(cmp.datasets, cmp.accuracies_a, cmp.accuracies_b)
                ],
            }
        return out

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n")

    def write_csv(self, path: str | Path) -> None:
        """Flat table: one row per dataset per model."""
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([
                "dataset", "family", "n_samples", "n_features", "n_classes",
                "n_hidden", "ridge_lambda", "kappa", "mean_accuracy",
                "accuracy_std", "cost_total",
            ])
            for r in self.rows:
                writer.writerow([
                    r.dataset, r.family, r.n_samples, r.n_features, r.n_classes,
                    r.spec.n_hidden, repr(r.spec.ridge_lambda),
                    "" if r.spec.kappa is None else r.spec.kappa,
                    repr(r.mean_accuracy),
                    repr(float(r.fold_accuracies.std())),
                    "" if r.cost is None else repr(r.cost.total),
                ])

    def write_sweep_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["dataset", "strategy", "mean_accuracy"])
            for s in self.sweep:
                writer.writerow([s.dataset, s.strategy, repr(s.mean_accuracy)])


def run_benchmark(
    datasets: list[Dataset],
    grid: HyperGrid,
    families: tuple[str, ...] = ("rvfl", "intrvfl"),
    n_folds: int = DEFAULT_FOLDS,
    n_seeds: int = DEFAULT_SEEDS,
    base_seed: int = 0,
    sweep_strategies: list[tuple[str, int]] | None = None,
    ga: GaConfig | None = None,
    cost_profile: CostProfile = DEFAULT_PROFILE,
    cost_boundary: int = 15,
    jobs: int = 1,
    progress=None,
) -> EvalReport:
    """Grid-search every family on every dataset and assemble the report.

    Per-dataset failures are recorded and skipped rather than aborting the
    run.  When ``sweep_strategies`` is given, the integer-readout arms are
    evaluated at each dataset's chosen intrvfl configuration.
    """
    report = EvalReport(n_folds=n_folds, n_seeds=n_seeds, base_seed=base_seed)
    for dataset in datasets:
        try:
            folds = make_folds(dataset, n_folds, derive_seed(base_seed, "folds"))
            best_int_spec = None
            for family in families:
                if progress:
                    progress(f"{dataset.name}: grid search ({family})")
                result = grid_search(family, dataset, grid, folds,
                                     n_seeds=n_seeds, base_seed=base_seed, jobs=jobs)
                if family == "intrvfl":
                    best_int_spec = result.best
                cost = count_ops(
                    family=family,
                    n_features=dataset.n_features,
                    n_hidden=result.best.n_hidden,
                    n_classes=dataset.n_classes,
                    kappa=result.best.kappa,
                    boundary=cost_boundary if family == "intrvfl" else None,
                    profile=cost_profile,
                )
                report.rows.append(DatasetEval(
                    dataset=dataset.name,
                    n_samples=dataset.n_samples,
                    n_features=dataset.n_features,
                    n_classes=dataset.n_classes,
                    family=family,
                    spec=result.best,
                    mean_accuracy=result.mean_accuracy,
                    fold_accuracies=result.accuracies,
                    seeds=result.seeds,
                    cost=cost,
                ))
            if sweep_strategies and best_int_spec is not None:
                if progress:
                    progress(f"{dataset.name}: readout sweep")
                merged = evaluate_readout_strategies(
                    dataset, best_int_spec, sweep_strategies, folds,
                    n_seeds=n_seeds, base_seed=base_seed, ga=ga, jobs=jobs,
                )
                for key, mean in merged.items():
                    report.sweep.append(SweepEval(dataset=dataset.name, strategy=key,
                                                  mean_accuracy=mean))
        except DataError as exc:
            report.failures.append((dataset.name, str(exc)))
    return report
