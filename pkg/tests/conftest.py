import numpy as np
import pytest

from intrvfl import Dataset, make_folds


def make_blobs_dataset(
    n_per_class: int = 100,
    n_features: int = 2,
    n_classes: int = 2,
    separation: float = 2.5,
    std: float = 1.0,
    seed: int = 42,
    name: str = "blobs",
) -> Dataset:
    """Gaussian blobs on a simplex-ish arrangement of centers."""
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, 1.0, size=(n_classes, n_features))
    centers *= separation / np.linalg.norm(centers, axis=1, keepdims=True)
    features = np.vstack([
        rng.normal(centers[c], std, size=(n_per_class, n_features))
        for c in range(n_classes)
    ])
    labels = np.repeat(np.arange(n_classes), n_per_class)
    return Dataset(features, labels, n_classes, name=name)


@pytest.fixture
def blobs():
    return make_blobs_dataset()


@pytest.fixture
def blobs_folds(blobs):
    return make_folds(blobs, 4, seed=11)
