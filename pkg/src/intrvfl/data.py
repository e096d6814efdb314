"""CSV ingestion, unit-interval normalization, one-hot targets, and
stratified cross-validation folds."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Dataset:
    """A classification dataset with dense integer labels.

    ``features`` is an (M, K) float matrix, ``labels`` an (M,) integer
    vector with values in ``[0, n_classes)``.  ``label_names`` keeps the
    original label tokens in first-appearance order when the dataset came
    from a file.
    """

    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    name: str = "dataset"
    label_names: tuple[str, ...] | None = None

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        if features.ndim != 2:
            raise DataError(f"{self.name}: features must be 2-d, got {features.ndim}-d")
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise DataError(f"{self.name}: labels must be one per sample")
        if features.shape[0] < 2:
            raise DataError(f"{self.name}: need at least 2 samples")
        if features.shape[1] < 1:
            raise DataError(f"{self.name}: need at least 1 feature")
        if self.n_classes < 2:
            raise DataError(f"{self.name}: need at least 2 classes, got {self.n_classes}")
        if labels.min() < 0 or labels.max() >= self.n_classes:
            raise DataError(f"{self.name}: labels out of range [0, {self.n_classes})")
        present = np.unique(labels)
        if present.size != self.n_classes:
            missing = sorted(set(range(self.n_classes)) - set(present.tolist()))
            raise DataError(f"{self.name}: classes {missing} have no samples")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices: np.ndarray, name: str | None = None) -> "Dataset":
        """Row subset keeping the full class index space."""
        return Dataset(
            self.features[indices],
            self.labels[indices],
            self.n_classes,
            name=name or self.name,
            label_names=self.label_names,
        )


@dataclass(frozen=True)
class Normalizer:
    """Per-feature min/max learned from training rows only."""

    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        minimum = np.asarray(self.minimum, dtype=np.float64)
        maximum = np.asarray(self.maximum, dtype=np.float64)
        object.__setattr__(self, "minimum", minimum)
        object.__setattr__(self, "maximum", maximum)
        if minimum.shape != maximum.shape or minimum.ndim != 1:
            raise ValueError("normalizer min/max must be matching 1-d vectors")
        if np.any(minimum > maximum):
            raise ValueError("normalizer has min > max")

    @property
    def n_features(self) -> int:
        return self.minimum.shape[0]

    @property
    def constant_features(self) -> np.ndarray:
        """Indices of features whose range collapsed to a point."""
        return np.flatnonzero(self.maximum == self.minimum)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified fold assignment: per class, fold sizes differ by at most 1."""

    n_folds: int
    assignment: np.ndarray
    seed: int

    def __post_init__(self):
        assignment = np.asarray(self.assignment, dtype=np.int64)
        object.__setattr__(self, "assignment", assignment)
        if self.n_folds < 2:
            raise ValueError("need at least 2 folds")
        if assignment.min() < 0 or assignment.max() >= self.n_folds:
            raise ValueError("fold assignment out of range")

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def _parse_cell(cell: str) -> float:
    return float(cell.strip())


def _is_numeric(cell: str) -> bool:
    try:
        _parse_cell(cell)
    except ValueError:
        return False
    return True


def load_csv(
    path: str | Path,
    label_column: int | str = -1,
    delimiter: str = ",",
    name: str | None = None,
) -> Dataset:
    """Load a delimited classification dataset.

    The first row is treated as a header when any cell outside the label
    column is non-numeric, or when ``label_column`` is given by name.
    Labels are re-indexed densely to ``[0, L)`` in first-appearance order.

    Raises ``DataError`` with the offending 1-based row number for
    malformed rows, and for datasets with fewer than two classes.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter) if row]
    if not rows:
        raise DataError(f"{path}: empty file")

    first = rows[0]
    n_cols = len(first)
    if n_cols < 2:
        raise DataError(f"{path}: need at least one feature column and a label column")

    if isinstance(label_column, str):
        header = [cell.strip() for cell in first]
        if label_column not in header:
            raise DataError(f"{path}: no column named {label_column!r} in header")
        label_idx = header.index(label_column)
        data_rows = rows[1:]
        first_data_row = 2
    else:
        if not -n_cols <= label_column < n_cols:
            raise DataError(
                f"{path}: label column {label_column} out of range for {n_cols} columns"
            )
        label_idx = label_column % n_cols
        non_label = [c for i, c in enumerate(first) if i != label_idx]
        has_header = any(not _is_numeric(c) for c in non_label)
        data_rows = rows[1:] if has_header else rows
        first_data_row = 2 if has_header else 1

    features = []
    raw_labels = []
    for offset, row in enumerate(data_rows):
        row_no = first_data_row + offset
        if len(row) != n_cols:
            raise DataError(f"{path}: row {row_no}: expected {n_cols} columns, got {len(row)}")
        feat = []
        for i, cell in enumerate(row):
            if i == label_idx:
                continue
            try:
                feat.append(_parse_cell(cell))
            except ValueError:
                raise DataError(
                    f"{path}: row {row_no}: feature cell {cell!r} is not a number"
                ) from None
        features.append(feat)
        raw_labels.append(row[label_idx].strip())

    if not features:
        raise DataError(f"{path}: no data rows")

    seen: dict[str, int] = {}
    labels = np.empty(len(raw_labels), dtype=np.int64)
    for i, token in enumerate(raw_labels):
        if token not in seen:
            seen[token] = len(seen)
        labels[i] = seen[token]
    if len(seen) < 2:
        raise DataError(f"{path}: only one class present ({next(iter(seen))!r})")

    return Dataset(
        np.asarray(features, dtype=np.float64),
        labels,
        n_classes=len(seen),
        name=name or path.stem,
        label_names=tuple(seen),
    )


def _feature_matrix(train) -> np.ndarray:
    matrix = train.features if isinstance(train, Dataset) else np.asarray(train, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 1:
        raise ValueError("normalizer needs a non-empty (M, K) feature matrix")
    return matrix


def fit_normalizer(train) -> Normalizer:
    """Learn per-feature min/max from a Dataset or an (M, K) matrix.

    Constant features are kept (they normalize to 0.0); a warning records
    how many collapsed.
    """
    matrix = _feature_matrix(train)
    norm = Normalizer(matrix.min(axis=0), matrix.max(axis=0))
    n_constant = norm.constant_features.size
    if n_constant:
        warnings.warn(
            f"{n_constant} constant feature(s) will normalize to 0.0",
            UserWarning,
            stacklevel=2,
        )
    return norm


def apply_normalizer(norm: Normalizer, x: np.ndarray) -> np.ndarray:
    """Map features into [0, 1], clipping out-of-range values.

    Accepts a single (K,) sample or an (M, K) matrix.  Features that were
    constant at fit time map to 0.0.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != norm.n_features:
        raise ValueError(f"expected {norm.n_features} features, got {x.shape[-1]}")
    span = norm.maximum - norm.minimum
    safe_span = np.where(span > 0, span, 1.0)
    out = (x - norm.minimum) / safe_span
    out = np.where(span > 0, out, 0.0)
    return np.clip(out, 0.0, 1.0)


def one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    """(M,) integer labels -> (M, L) one-hot target matrix."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise ValueError(f"labels out of range [0, {n_classes})")
    out = np.zeros((labels.shape[0], n_classes), dtype=np.float64)
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def make_folds(ds: Dataset, n_folds: int, seed: int) -> FoldPlan:
    """Stratified fold assignment, deterministic in (dataset, n_folds, seed).

    Members of each class are shuffled and dealt round-robin, so per-class
    fold sizes differ by at most one.  A class with fewer than ``n_folds``
    members is an error.
    """
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    assignment = np.empty(ds.n_samples, dtype=np.int64)
    for cls in range(ds.n_classes):
        members = np.flatnonzero(ds.labels == cls)
        if members.size < n_folds:
            label = ds.label_names[cls] if ds.label_names else cls
            raise DataError(
                f"{ds.name}: class {label!r} has {members.size} samples, "
                f"fewer than {n_folds} folds"
            )
        members = rng.permutation(members)
        assignment[members] = np.arange(members.size) % n_folds
    return FoldPlan(n_folds=n_folds, assignment=assignment, seed=seed)
