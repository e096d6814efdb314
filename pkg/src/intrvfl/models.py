"""Model assembly: network wrappers, end-to-end training, prediction, and
seed-regenerable serialization.

A trained classifier bundles the normalizer, the frozen random projection
(stored as its seed only), and the trained readout.  Model files are plain
JSON; loading regenerates the projection from the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import baseline_net, integer_net
from .data import Dataset, Normalizer, apply_normalizer, fit_normalizer, one_hot
from .encoding import encode_features
from .errors import ConfigError
from .readout import GaConfig, IntReadout, ga_refine, quantize_readout
from .ridge import RealReadout, collect_hidden, solve_ridge
from .seeding import derive_seed

FAMILIES = ("rvfl", "intrvfl")
READOUT_MODES = ("real", "quantized", "ga", "ga-from-quantized")
MODEL_FORMAT = "intrvfl-model/1"


@dataclass(frozen=True)
class IntRVFLNetwork:
    """Density-encoded integer network: bipolar projection + clipped sums."""

    projection: integer_net.BipolarProjection
    kappa: int

    @property
    def description(self) -> str:
        p = self.projection
        return f"intrvfl(N={p.n_hidden}, K={p.n_features}, kappa={self.kappa}, seed={p.seed})"

    def hidden(self, x01: np.ndarray) -> integer_net.HiddenState:
        levels = encode_features(x01, self.projection.n_hidden)
        return integer_net.hidden_shortcut(levels, self.projection, self.kappa)

    def hidden_batch(self, x01: np.ndarray) -> np.ndarray:
        levels = encode_features(x01, self.projection.n_hidden)
        return integer_net.hidden_batch(levels, self.projection, self.kappa)


@dataclass(frozen=True)
class RVFLNetwork:
    """Conventional network: real uniform projection + bias + sigmoid."""

    projection: baseline_net.RealProjection

    @property
    def description(self) -> str:
        p = self.projection
        return f"rvfl(N={p.n_hidden}, K={p.n_features}, seed={p.seed})"

    def hidden(self, x01: np.ndarray) -> np.ndarray:
        return baseline_net.hidden_sigmoid(x01, self.projection)

    def hidden_batch(self, x01: np.ndarray) -> np.ndarray:
        return baseline_net.hidden_sigmoid_batch(x01, self.projection)


@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to train one model, minus the data.

    ``kappa`` applies to the intrvfl family only; quantized and genetic
    readout modes need a boundary and are intrvfl-only (integer readouts on
    a real-valued hidden layer would not make the inference integer).
    """

    family: str
    n_hidden: int
    ridge_lambda: float
    kappa: int | None = None
    readout_mode: str = "real"
    boundary: int | None = None
    ga: GaConfig | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.readout_mode not in READOUT_MODES:
            raise ConfigError(
                f"unknown readout mode {self.readout_mode!r}; expected one of {READOUT_MODES}"
            )
        if self.n_hidden < 1:
            raise ConfigError("n_hidden must be >= 1")
        if self.ridge_lambda <= 0:
            raise ConfigError("ridge_lambda must be > 0")
        if self.family == "intrvfl":
            if self.kappa is None or self.kappa < 1:
                raise ConfigError("intrvfl needs kappa >= 1")
        elif self.kappa is not None:
            raise ConfigError("kappa applies to the intrvfl family only")
        if self.readout_mode != "real":
            if self.family != "intrvfl":
                raise ConfigError("integer readout modes require the intrvfl family")
            if self.boundary is None or self.boundary < 1:
                raise ConfigError(f"readout mode {self.readout_mode!r} needs boundary >= 1")

    def with_readout(self, readout_mode: str, boundary: int | None = None,
                     ga: GaConfig | None = None) -> "ModelSpec":
        return replace(self, readout_mode=readout_mode, boundary=boundary, ga=ga)


def build_network(spec: ModelSpec, n_features: int, projection_seed: int):
    if spec.family == "intrvfl":
        proj = integer_net.generate_bipolar(spec.n_hidden, n_features, projection_seed)
        return IntRVFLNetwork(projection=proj, kappa=spec.kappa)
    proj = baseline_net.generate_real(spec.n_hidden, n_features, projection_seed)
    return RVFLNetwork(projection=proj)


def fit_readout(
    spec: ModelSpec,
    real_readout: RealReadout,
    hidden: np.ndarray,
    labels: np.ndarray,
    ga_seed: int,
) -> RealReadout | IntReadout:
    """Derive the requested readout mode from the ridge solution.

    The genetic modes search on the given (training) hidden states; the
    resulting integer readout is validated against the widest supported
    accumulator so overflow is a build error, never a silent wrap.
    """
    if spec.readout_mode == "real":
        return real_readout
    quantized = quantize_readout(real_readout, spec.boundary)
    if spec.readout_mode == "quantized":
        result = quantized
    else:
        cfg = spec.ga or GaConfig()
        cfg = replace(cfg, seed=ga_seed)
        init = quantized if spec.readout_mode == "ga-from-quantized" else None
        result = ga_refine(init, hidden, labels, spec.boundary, cfg)
    bound = integer_net.score_bound(spec.n_hidden, spec.kappa, spec.boundary)
    integer_net.select_accumulator_bits(bound)
    return result


@dataclass(frozen=True)
class Classifier:
    """A trained model: normalizer + frozen network + readout."""

    spec: ModelSpec
    network: IntRVFLNetwork | RVFLNetwork
    readout: RealReadout | IntReadout
    normalizer: Normalizer
    n_classes: int
    label_names: tuple[str, ...] | None = None

    def scores(self, features: np.ndarray) -> np.ndarray:
        """Class scores for raw (unnormalized) features, one row per sample."""
        x01 = apply_normalizer(self.normalizer, np.atleast_2d(features))
        hidden = self.network.hidden_batch(x01)
        if isinstance(self.readout, IntReadout):
            return hidden.astype(np.int64) @ self.readout.weights.T
        return hidden @ self.readout.weights.T

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Predicted class indices; argmax ties go to the lowest index."""
        return np.argmax(self.scores(features), axis=1)

    def accuracy(self, dataset: Dataset) -> float:
        return float(np.mean(self.predict(dataset.features) == dataset.labels))


def train_classifier(spec: ModelSpec, dataset: Dataset, base_seed: int = 0) -> Classifier:
    """Train on the full dataset: fit the normalizer, collect hidden states,
    solve the ridge system, then apply the readout mode."""
    projection_seed = derive_seed(base_seed, "projection", 0)
    network = build_network(spec, dataset.n_features, projection_seed)
    normalizer = fit_normalizer(dataset)
    x01 = apply_normalizer(normalizer, dataset.features)
    hidden = collect_hidden(network, x01)
    targets = one_hot(dataset.labels, dataset.n_classes)
    real = solve_ridge(hidden, targets, spec.ridge_lambda)
    readout = fit_readout(spec, real, hidden.values, dataset.labels,
                          ga_seed=derive_seed(base_seed, "ga", 0))
    return Classifier(
        spec=spec,
        network=network,
        readout=readout,
        normalizer=normalizer,
        n_classes=dataset.n_classes,
        label_names=dataset.label_names,
    )


def save_model(clf: Classifier, path: str | Path) -> None:
    """Write the model as JSON.  The projection is stored as its seed only."""
    readout: dict = {"mode": clf.spec.readout_mode}
    if isinstance(clf.readout, IntReadout):
        readout.update(
            kind="int",
            boundary=clf.readout.boundary,
            scale=clf.readout.scale,
            weights=clf.readout.weights.tolist(),
        )
    else:
        readout.update(
            kind="real",
            ridge_lambda=clf.readout.ridge_lambda,
            weights=clf.readout.weights.tolist(),
        )
    payload = {
        "format": MODEL_FORMAT,
        "family": clf.spec.family,
        "n_hidden": clf.spec.n_hidden,
        "n_features": clf.normalizer.n_features,
        "n_classes": clf.n_classes,
        "kappa": clf.spec.kappa,
        "ridge_lambda": clf.spec.ridge_lambda,
        "projection_seed": clf.network.projection.seed,
        "normalizer": {
            "minimum": clf.normalizer.minimum.tolist(),
            "maximum": clf.normalizer.maximum.tolist(),
        },
        "readout": readout,
        "label_names": list(clf.label_names) if clf.label_names else None,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_model(path: str | Path) -> Classifier:
    """Load a model file and regenerate its projection from the stored seed."""
    payload = json.loads(Path(path).read_text())
    if payload.get("format") != MODEL_FORMAT:
        raise ConfigError(f"{path}: unknown model format {payload.get('format')!r}")
    raw = payload["readout"]
    if raw["kind"] == "int":
        readout = IntReadout(
            np.asarray(raw["weights"], dtype=np.int64),
            boundary=raw["boundary"],
            scale=raw["scale"],
        )
        boundary = raw["boundary"]
    else:
        readout = RealReadout(
            np.asarray(raw["weights"], dtype=np.float64),
            ridge_lambda=raw["ridge_lambda"],
        )
        boundary = None
    spec = ModelSpec(
        family=payload["family"],
        n_hidden=payload["n_hidden"],
        ridge_lambda=payload["ridge_lambda"],
        kappa=payload["kappa"],
        readout_mode=raw["mode"],
        boundary=boundary,
    )
    network = build_network(spec, payload["n_features"], payload["projection_seed"])
    normalizer = Normalizer(
        np.asarray(payload["normalizer"]["minimum"], dtype=np.float64),
        np.asarray(payload["normalizer"]["maximum"], dtype=np.float64),
    )
    names = payload.get("label_names")
    return Classifier(
        spec=spec,
        network=network,
        readout=readout,
        normalizer=normalizer,
        n_classes=payload["n_classes"],
        label_names=tuple(names) if names else None,
    )
