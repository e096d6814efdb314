"""Command-line interface.

Commands: train, eval, grid, benchmark, compare, cost.  Options resolve in
priority order flag > environment > config file > built-in default, with
the config file being plain JSON whose keys mirror the long flag names.
Report-producing commands write JSON + CSV into the output directory and
render matplotlib figures next to them (disable with --no-figures).

Exit codes: 0 success, 2 configuration error, 3 data error, 4 benchmark
finished with per-dataset failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import figures
from .costs import DEFAULT_PROFILE, CostProfile, count_ops, max_hidden_under_budget
from .data import load_csv, make_folds
from .errors import ConfigError, DataError
from .evaluation import HyperGrid, compare_models, grid_search, run_benchmark
from .models import (
    FAMILIES,
    ModelSpec,
    load_model,
    save_model,
    train_classifier,
)
from .readout import GaConfig
from .seeding import derive_seed

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_PARTIAL = 4

ENV_OUTPUT_DIR = "INTRVFL_OUTPUT_DIR"
ENV_JOBS = "INTRVFL_JOBS"

#: genetic refinement is skipped in sweeps above this boundary unless the
#: user raises the limit; past ~13 quantization levels it stops paying off
DEFAULT_GA_MAX_BOUNDARY = 6


class Settings:
    """Resolved options: flag > env > config file > default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_cfg: dict = {}
        config_path = getattr(args, "config", None)
        if config_path:
            try:
                self.file_cfg = json.loads(Path(config_path).read_text())
            except FileNotFoundError:
                raise ConfigError(f"config file not found: {config_path}") from None
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {config_path}: {exc}") from None
            if not isinstance(self.file_cfg, dict):
                raise ConfigError(f"config file {config_path} must hold a JSON object")

    def get(self, key: str, default=None, env: str | None = None):
        value = getattr(self.args, key, None)
        if value is not None:
            return value
        if env and os.environ.get(env):
            return os.environ[env]
        if key in self.file_cfg:
            return self.file_cfg[key]
        return default

    @property
    def output_dir(self) -> Path:
        out = Path(self.get("output_dir", "intrvfl-out", env=ENV_OUTPUT_DIR))
        out.mkdir(parents=True, exist_ok=True)
        return out

    @property
    def jobs(self) -> int:
        return int(self.get("jobs", 1, env=ENV_JOBS))

    @property
    def figures_enabled(self) -> bool:
        if getattr(self.args, "no_figures", False):
            return False
        return bool(self.get("figures", True))

    def ga_config(self) -> GaConfig:
        file_ga = self.file_cfg.get("ga", {})
        def pick(key, default):
            value = getattr(self.args, f"ga_{key}", None)
            if value is not None:
                return value
            return file_ga.get(key, default)
        return GaConfig(
            population=int(pick("population", 50)),
            generations=int(pick("generations", 100)),
            mutation_rate=float(pick("mutation_rate", 0.05)),
            elite_fraction=float(pick("elite_fraction", 0.1)),
            tournament_size=int(pick("tournament_size", 3)),
        )

    def grid(self) -> HyperGrid:
        file_grid = self.file_cfg.get("grid", {})
        if getattr(self.args, "full_grid", False):
            n_max = 1500
        else:
            n_max = int(self.get("n_max", file_grid.get("n_max", 500)))
        n_min = int(self.get("n_min", file_grid.get("n_min", 50)))
        n_step = int(self.get("n_step", file_grid.get("n_step", 50)))
        n_values = self.get("n_values", file_grid.get("n_values"))
        if n_values is not None:
            ns = tuple(int(v) for v in _split_list(n_values))
        else:
            ns = tuple(range(n_min, n_max + 1, n_step))
        lam_lo = int(self.get("lambda_min_exp", file_grid.get("lambda_min_exp", -10)))
        lam_hi = int(self.get("lambda_max_exp", file_grid.get("lambda_max_exp", 5)))
        lambdas = tuple(float(2.0**k) for k in range(lam_lo, lam_hi + 1))
        kappas = self.get("kappas", file_grid.get("kappas", (1, 3, 5, 7)))
        kappas = tuple(int(v) for v in _split_list(kappas))
        return HyperGrid(n_values=ns, lambda_values=lambdas, kappa_values=kappas)

    def cost_profile(self) -> CostProfile:
        path = self.get("profile")
        if path is None:
            inline = self.file_cfg.get("cost_profile")
            if isinstance(inline, dict):
                return CostProfile(**inline)
            return DEFAULT_PROFILE
        return CostProfile.from_file(path)


def _split_list(value) -> list:
    if isinstance(value, str):
        return [v for v in value.replace(" ", "").split(",") if v]
    return list(value)


def _parse_label_column(raw) -> int | str:
    if raw is None:
        return -1
    try:
        return int(raw)
    except (TypeError, ValueError):
        return str(raw)


def parse_readout_mode(text: str) -> tuple[str, int | None]:
    """Parse 'real', 'quantized:B', 'ga:B', or 'ga-from-quantized:B'."""
    if text == "real":
        return "real", None
    if ":" not in text:
        raise ConfigError(f"readout mode {text!r} needs a boundary, e.g. 'quantized:15'")
    mode, _, raw = text.partition(":")
    if mode not in ("quantized", "ga", "ga-from-quantized"):
        raise ConfigError(f"unknown readout mode {mode!r}")
    try:
        boundary = int(raw)
    except ValueError:
        raise ConfigError(f"readout boundary {raw!r} is not an integer") from None
    if boundary < 1:
        raise ConfigError("readout boundary must be >= 1")
    return mode, boundary


def _load_dataset(settings: Settings, path=None):
    data = path or settings.get("data")
    if not data:
        raise ConfigError("no dataset given (flag --data or config key 'data')")
    label = _parse_label_column(settings.get("label_column"))
    delimiter = settings.get("delimiter", ",")
    return load_csv(data, label_column=label, delimiter=delimiter)


def _echo(message: str) -> None:
    print(message, flush=True)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def _cmd_train(settings: Settings) -> int:
    dataset = _load_dataset(settings)
    mode, boundary = parse_readout_mode(settings.get("readout", "real"))
    family = settings.get("model", "intrvfl")
    spec = ModelSpec(
        family=family,
        n_hidden=int(settings.get("hidden", 200)),
        ridge_lambda=float(settings.get("ridge_lambda", 2.0**-5)),
        kappa=int(settings.get("kappa", 3)) if family == "intrvfl" else None,
        readout_mode=mode,
        boundary=boundary,
        ga=settings.ga_config() if mode.startswith("ga") else None,
    )
    base_seed = int(settings.get("base_seed", 0))
    clf = train_classifier(spec, dataset, base_seed=base_seed)
    out = Path(settings.get("out") or settings.output_dir / f"{dataset.name}-{family}.json")
    save_model(clf, out)
    _echo(f"dataset      {dataset.name}: M={dataset.n_samples} K={dataset.n_features} "
          f"L={dataset.n_classes}")
    _echo(f"model        {family} N={spec.n_hidden} lambda={spec.ridge_lambda:g}"
          + (f" kappa={spec.kappa}" if spec.kappa else ""))
    _echo(f"readout      {settings.get('readout', 'real')}")
    _echo(f"train acc    {clf.accuracy(dataset):.4f}")
    _echo(f"model file   {out}")
    return EXIT_OK


def _cmd_eval(settings: Settings) -> int:
    model_path = settings.get("model_file")
    if not model_path:
        raise ConfigError("eval needs --model-file")
    try:
        clf = load_model(model_path)
    except FileNotFoundError:
        raise DataError(f"no such model file: {model_path}") from None
    dataset = _load_dataset(settings)
    accuracy = clf.accuracy(dataset)
    _echo(f"dataset      {dataset.name}: M={dataset.n_samples}")
    _echo(f"accuracy     {accuracy:.4f}")
    out = settings.get("out")
    if out:
        Path(out).write_text(json.dumps(
            {"dataset": dataset.name, "n_samples": dataset.n_samples,
             "accuracy": accuracy}, indent=2, sort_keys=True) + "\n")
        _echo(f"wrote        {out}")
    return EXIT_OK


def _cmd_grid(settings: Settings) -> int:
    dataset = _load_dataset(settings)
    family = settings.get("model", "intrvfl")
    grid = settings.grid()
    base_seed = int(settings.get("base_seed", 0))
    n_folds = int(settings.get("folds", 4))
    n_seeds = int(settings.get("seeds", 5))
    folds = make_folds(dataset, n_folds, derive_seed(base_seed, "folds"))
    result = grid_search(family, dataset, grid, folds, n_seeds=n_seeds,
                         base_seed=base_seed, jobs=settings.jobs)
    best = result.best
    _echo(f"dataset      {dataset.name}")
    _echo(f"best         N={best.n_hidden} lambda={best.ridge_lambda:g}"
          + (f" kappa={best.kappa}" if best.kappa else ""))
    _echo(f"cv accuracy  {result.mean_accuracy:.4f}")
    out_dir = settings.output_dir
    table_path = out_dir / f"grid-{dataset.name}-{family}.csv"
    with table_path.open("w") as fh:
        fh.write("n_hidden,kappa,ridge_lambda,mean_accuracy\n")
        kappas = grid.kappa_axis(family)
        for i_n, n_hidden in enumerate(grid.n_values):
            for i_k, kappa in enumerate(kappas):
                for i_l, lam in enumerate(grid.lambda_values):
                    kap = kappa if family == "intrvfl" else ""
                    fh.write(f"{n_hidden},{kap},{lam!r},{result.table[i_n, i_k, i_l]!r}\n")
    _echo(f"grid table   {table_path}")
    return EXIT_OK


def _parse_sweep(raw) -> list[tuple[str, int]]:
    arms = []
    for token in _split_list(raw):
        mode, boundary = parse_readout_mode(token)
        if mode == "real":
            continue
        arms.append((mode, boundary))
    return arms


def _cmd_benchmark(settings: Settings) -> int:
    data_dir = settings.get("data_dir")
    paths = sorted(Path(data_dir).glob("*.csv")) if data_dir else []
    extra = settings.get("data")
    if extra:
        paths.extend(Path(p) for p in _split_list(extra))
    if not paths:
        raise DataError("benchmark found no dataset files")
    label = _parse_label_column(settings.get("label_column"))

    datasets = []
    load_failures = []
    for path in paths:
        try:
            datasets.append(load_csv(path, label_column=label,
                                     delimiter=settings.get("delimiter", ",")))
        except DataError as exc:
            load_failures.append((path.stem, str(exc)))
            _echo(f"skipping {path.name}: {exc}")

    families = tuple(_split_list(settings.get("families", "rvfl,intrvfl")))
    for family in families:
        if family not in FAMILIES:
            raise ConfigError(f"unknown family {family!r}")
    sweep = _parse_sweep(settings.get("readout_sweep", []))
    ga_max = int(settings.get("ga_max_boundary", DEFAULT_GA_MAX_BOUNDARY))
    kept = []
    for mode, boundary in sweep:
        if mode.startswith("ga") and boundary > ga_max:
            _echo(f"skipping sweep arm {mode}:{boundary} "
                  f"(genetic refinement disabled above boundary {ga_max})")
            continue
        kept.append((mode, boundary))

    report = run_benchmark(
        datasets,
        grid=settings.grid(),
        families=families,
        n_folds=int(settings.get("folds", 4)),
        n_seeds=int(settings.get("seeds", 5)),
        base_seed=int(settings.get("base_seed", 0)),
        sweep_strategies=kept or None,
        ga=settings.ga_config(),
        cost_profile=settings.cost_profile(),
        jobs=settings.jobs,
        progress=_echo if settings.get("verbose") else None,
    )
    report.failures.extend(load_failures)

    if not report.rows:
        raise DataError("benchmark produced no results")
    out_dir = settings.output_dir
    report.write_json(out_dir / "report.json")
    report.write_csv(out_dir / "report.csv")
    _echo(f"report       {out_dir / 'report.json'}")
    _echo(f"table        {out_dir / 'report.csv'}")
    if report.sweep:
        report.write_sweep_csv(out_dir / "sweep.csv")
        _echo(f"sweep table  {out_dir / 'sweep.csv'}")
    for family in report.families():
        _echo(f"mean accuracy {family:8s} {report.aggregate_mean(family):.4f}")
    if len(report.families()) == 2:
        cmp = report.comparison(*report.families())
        r = "n/a" if cmp.pearson_r is None else f"{cmp.pearson_r:.3f}"
        _echo(f"pearson r    {r}")
        if settings.figures_enabled:
            path = figures.save_accuracy_scatter(cmp, out_dir / "accuracy-scatter.png")
            _echo(f"figure       {path}")
    if report.sweep and settings.figures_enabled:
        path = figures.save_readout_sweep(report, out_dir / "readout-sweep.png")
        _echo(f"figure       {path}")
    if report.failures:
        for name, error in report.failures:
            _echo(f"failed       {name}: {error}")
        return EXIT_PARTIAL
    return EXIT_OK


def _rows_from_report(path: str, family: str) -> dict[str, float]:
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise DataError(f"no such report: {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"report {path}: {exc}") from None
    rows = {
        row["dataset"]: row["mean_accuracy"]
        for row in payload.get("datasets", [])
        if row["family"] == family
    }
    if not rows:
        raise DataError(f"report {path} has no rows for family {family!r}")
    return rows


def _cmd_compare(settings: Settings) -> int:
    report_a = settings.get("report_a")
    if not report_a:
        raise ConfigError("compare needs --report-a")
    report_b = settings.get("report_b", report_a)
    family_a = settings.get("family_a", "rvfl")
    family_b = settings.get("family_b", "intrvfl")
    cmp = compare_models(
        _rows_from_report(report_a, family_a),
        _rows_from_report(report_b, family_b),
        label_a=family_a, label_b=family_b,
    )
    for name, a, b in zip(cmp.datasets, cmp.accuracies_a, cmp.accuracies_b):
        _echo(f"{name:28s} {a:.4f}  {b:.4f}")
    _echo(f"{'mean':28s} {cmp.mean_a:.4f}  {cmp.mean_b:.4f}")
    r = "n/a" if cmp.pearson_r is None else f"{cmp.pearson_r:.4f}"
    _echo(f"pearson r    {r}")
    out_dir = settings.output_dir
    table = out_dir / "comparison.csv"
    with table.open("w") as fh:
        fh.write(f"dataset,accuracy_{family_a},accuracy_{family_b}\n")
        for name, a, b in zip(cmp.datasets, cmp.accuracies_a, cmp.accuracies_b):
            fh.write(f"{name},{a!r},{b!r}\n")
    _echo(f"table        {table}")
    if settings.figures_enabled:
        path = figures.save_accuracy_scatter(cmp, out_dir / "comparison-scatter.png")
        _echo(f"figure       {path}")
    return EXIT_OK


def _cmd_cost(settings: Settings) -> int:
    n_features = int(settings.get("features", 16))
    n_classes = int(settings.get("classes", 4))
    n_hidden = int(settings.get("hidden", 512))
    kappa = int(settings.get("kappa", 3))
    boundary = int(settings.get("boundary", 15))
    profile = settings.cost_profile()
    int_cost = count_ops("intrvfl", n_features, n_hidden, n_classes,
                         kappa=kappa, boundary=boundary, profile=profile)
    real_cost = count_ops("rvfl", n_features, n_hidden, n_classes, profile=profile)
    _echo(f"network      K={n_features} N={n_hidden} L={n_classes} "
          f"kappa={kappa} boundary={boundary}")
    for cost in (int_cost, real_cost):
        _echo(f"--- {cost.family}")
        for stage, ops in cost.stages.items():
            parts = " ".join(f"{op}={count}" for op, count in ops.items()) or "-"
            _echo(f"  {stage:9s} {parts}  (cost {cost.stage_total(profile, stage):g})")
        bits = " ".join(f"{k}={v}" for k, v in cost.stage_bits.items())
        _echo(f"  bits      {bits}")
        _echo(f"  total     {cost.total:g}")
    ratio = real_cost.total / int_cost.total
    _echo(f"ratio        rvfl/intrvfl = {ratio:.2f}x")

    budget = settings.get("budget")
    if budget is not None:
        budget = float(budget)
        for family, kap in (("intrvfl", kappa), ("rvfl", None)):
            best_n = max_hidden_under_budget(family, n_features, n_classes,
                                             kap, profile, budget)
            text = "budget infeasible" if best_n is None else f"max N = {best_n}"
            _echo(f"budget {budget:g}  {family:8s} {text}")

    out_dir = settings.output_dir
    table = out_dir / "cost.csv"
    with table.open("w") as fh:
        fh.write("family,stage,op,count,cost\n")
        for cost in (int_cost, real_cost):
            for stage, ops in cost.stages.items():
                for op, count in ops.items():
                    fh.write(f"{cost.family},{stage},{op},{count},"
                             f"{count * getattr(profile, op)!r}\n")
            fh.write(f"{cost.family},total,,,{cost.total!r}\n")
    _echo(f"table        {table}")
    if settings.figures_enabled:
        path = figures.save_cost_breakdown(int_cost, real_cost, profile,
                                           out_dir / "cost-breakdown.png")
        _echo(f"figure       {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    parser.add_argument("--output-dir", help=f"report directory (env {ENV_OUTPUT_DIR})")
    parser.add_argument("--jobs", type=int, help=f"parallel workers (env {ENV_JOBS})")
    parser.add_argument("--base-seed", type=int, help="base seed for all randomness")
    parser.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    parser.add_argument("--verbose", action="store_true", help="progress output")


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", help="dataset CSV path")
    parser.add_argument("--label-column", help="label column index or header name")
    parser.add_argument("--delimiter", help="CSV delimiter (default comma)")


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-min", type=int, help="smallest hidden size (default 50)")
    parser.add_argument("--n-max", type=int, help="largest hidden size (default 500)")
    parser.add_argument("--n-step", type=int, help="hidden size step (default 50)")
    parser.add_argument("--n-values", help="explicit hidden sizes, comma separated")
    parser.add_argument("--lambda-min-exp", type=int, help="smallest lambda exponent (default -10)")
    parser.add_argument("--lambda-max-exp", type=int, help="largest lambda exponent (default 5)")
    parser.add_argument("--kappas", help="clipping thresholds (default 1,3,5,7)")
    parser.add_argument("--full-grid", action="store_true", help="hidden sizes up to 1500")


def _add_ga_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ga-population", type=int)
    parser.add_argument("--ga-generations", type=int)
    parser.add_argument("--ga-mutation-rate", type=float)
    parser.add_argument("--ga-elite-fraction", type=float)
    parser.add_argument("--ga-tournament-size", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intrvfl",
        description="Integer RVFL classifiers with density-encoded inputs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one model and serialize it")
    _add_common(p); _add_data_flags(p); _add_ga_flags(p)
    p.add_argument("--model", choices=FAMILIES, help="model family (default intrvfl)")
    p.add_argument("--hidden", type=int, help="hidden neurons (default 200)")
    p.add_argument("--ridge-lambda", type=float, help="regularization (default 2^-5)")
    p.add_argument("--kappa", type=int, help="clipping threshold (default 3)")
    p.add_argument("--readout", help="real | quantized:B | ga:B | ga-from-quantized:B")
    p.add_argument("--out", help="model file path")
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved model on a dataset")
    _add_common(p); _add_data_flags(p)
    p.add_argument("--model-file", help="model JSON produced by train")
    p.add_argument("--out", help="optional JSON result path")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("grid", help="grid-search one dataset")
    _add_common(p); _add_data_flags(p); _add_grid_flags(p)
    p.add_argument("--model", choices=FAMILIES, help="model family (default intrvfl)")
    p.add_argument("--folds", type=int, help="CV folds (default 4)")
    p.add_argument("--seeds", type=int, help="independent initializations (default 5)")
    p.set_defaults(handler=_cmd_grid)

    p = sub.add_parser("benchmark", help="grid-search a dataset directory")
    _add_common(p); _add_data_flags(p); _add_grid_flags(p); _add_ga_flags(p)
    p.add_argument("--data-dir", help="directory of CSV datasets")
    p.add_argument("--families", help="comma-separated (default rvfl,intrvfl)")
    p.add_argument("--folds", type=int, help="CV folds (default 4)")
    p.add_argument("--seeds", type=int, help="independent initializations (default 5)")
    p.add_argument("--readout-sweep", help="integer readout arms, e.g. "
                                           "'quantized:1,quantized:15,ga-from-quantized:1'")
    p.add_argument("--ga-max-boundary", type=int,
                   help=f"skip genetic arms above this boundary (default {DEFAULT_GA_MAX_BOUNDARY})")
    p.add_argument("--profile", help="cost profile JSON")
    p.set_defaults(handler=_cmd_benchmark)

    p = sub.add_parser("compare", help="scatter two benchmark reports")
    _add_common(p)
    p.add_argument("--report-a", help="benchmark report JSON")
    p.add_argument("--report-b", help="second report (default: same as --report-a)")
    p.add_argument("--family-a", help="family for the x axis (default rvfl)")
    p.add_argument("--family-b", help="family for the y axis (default intrvfl)")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("cost", help="operation counts and budget sizing")
    _add_common(p)
    p.add_argument("--features", type=int, help="input features K (default 16)")
    p.add_argument("--classes", type=int, help="output classes L (default 4)")
    p.add_argument("--hidden", type=int, help="hidden neurons N (default 512)")
    p.add_argument("--kappa", type=int, help="clipping threshold (default 3)")
    p.add_argument("--boundary", type=int, help="readout boundary B (default 15)")
    p.add_argument("--budget", type=float, help="abstract energy budget")
    p.add_argument("--profile", help="cost profile JSON")
    p.set_defaults(handler=_cmd_cost)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings(args)
        return args.handler(settings)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
