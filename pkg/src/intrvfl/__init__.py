"""Integer random vector functional link classifiers with density-encoded
inputs, plus the conventional RVFL baseline, ridge training, integer
readout quantization, a CV benchmark harness, and an operation-count cost
model."""

from .baseline_net import RealProjection, forward_real, generate_real, hidden_sigmoid
from .costs import DEFAULT_PROFILE, CostProfile, InferenceCost, count_ops, max_hidden_under_budget
from .data import (
    Dataset,
    FoldPlan,
    Normalizer,
    apply_normalizer,
    fit_normalizer,
    load_csv,
    make_folds,
    one_hot,
)
from .encoding import DensityCode, encode, encode_features, materialize_features, quantize
from .errors import ConfigError, DataError, IntRvflError
from .evaluation import (
    ComparisonResult,
    CrossValResult,
    EvalReport,
    GridSearchResult,
    HyperGrid,
    compare_models,
    cross_validate,
    evaluate_readout_strategies,
    grid_search,
    run_benchmark,
)
from .integer_net import (
    BipolarProjection,
    HiddenState,
    clip,
    forward_int,
    generate_bipolar,
    hidden_explicit,
    hidden_shortcut,
)
from .models import (
    Classifier,
    IntRVFLNetwork,
    ModelSpec,
    RVFLNetwork,
    load_model,
    save_model,
    train_classifier,
)
from .readout import GaConfig, IntReadout, ga_refine, glvq_cost, quantize_readout
from .ridge import HiddenMatrix, RealReadout, collect_hidden, solve_ridge
from .seeding import derive_seed

__version__ = "0.1.0"

__all__ = [
    "BipolarProjection",
    "Classifier",
    "ComparisonResult",
    "ConfigError",
    "CostProfile",
    "CrossValResult",
    "DEFAULT_PROFILE",
    "DataError",
    "Dataset",
    "DensityCode",
    "EvalReport",
    "FoldPlan",
    "GaConfig",
    "GridSearchResult",
    "HiddenMatrix",
    "HiddenState",
    "HyperGrid",
    "InferenceCost",
    "IntReadout",
    "IntRVFLNetwork",
    "IntRvflError",
    "ModelSpec",
    "Normalizer",
    "RVFLNetwork",
    "RealProjection",
    "RealReadout",
    "apply_normalizer",
    "clip",
    "collect_hidden",
    "compare_models",
    "count_ops",
    "cross_validate",
    "derive_seed",
    "encode",
    "encode_features",
    "evaluate_readout_strategies",
    "fit_normalizer",
    "forward_int",
    "forward_real",
    "ga_refine",
    "generate_bipolar",
    "generate_real",
    "glvq_cost",
    "grid_search",
    "hidden_explicit",
    "hidden_shortcut",
    "hidden_sigmoid",
    "load_csv",
    "load_model",
    "make_folds",
    "materialize_features",
    "max_hidden_under_budget",
    "one_hot",
    "quantize",
    "quantize_readout",
    "run_benchmark",
    "save_model",
    "solve_ridge",
    "train_classifier",
]
