#!/usr/bin/env python3
"""Generate the desk-scale benchmark subset under data/benchmark/.

Eleven small classification datasets (every M <= 2000), written as plain
CSV with the label in the last column, mirroring the structure of small
UCI tables:

* four real tables that ship with scikit-learn: iris, wine, breast
  cancer, and a stratified 1000-row subsample of the 1797-row digits
  table (kept smaller purely for benchmark runtime);
* seven synthetic tables in the style of tabular UCI data, spanning
  difficulty from near-trivial to heavily overlapping: Gaussian blobs,
  two low-dimensional manifold problems (moons, circles), a two-spiral
  problem, labels from a shallow axis-aligned threshold rule, per-feature
  interval bands, and integer count attributes.

Everything is seeded, so the files are reproducible byte for byte.

Usage: python3 scripts/make_benchmark_data.py [out_dir]
"""

import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import (
    load_breast_cancer,
    load_digits,
    load_iris,
    load_wine,
    make_circles,
    make_moons,
)

OUT_DIR = Path(__file__).resolve().parent.parent / "data" / "benchmark"


def write_csv(path: Path, features: np.ndarray, labels: np.ndarray, names=None) -> dict:
    lines = []
    for row, label in zip(features, labels):
        token = names[label] if names is not None else f"c{label}"
        lines.append(",".join(repr(float(v)) for v in row) + f",{token}")
    path.write_text("\n".join(lines) + "\n")
    return {
        "file": path.name,
        "M": features.shape[0],
        "K": features.shape[1],
        "L": int(labels.max()) + 1,
    }


def stratified_head(features, labels, per_class, seed):
    rng = np.random.default_rng(seed)
    keep = []
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        keep.append(rng.permutation(members)[:per_class])
    keep = np.sort(np.concatenate(keep))
    return features[keep], labels[keep]


def gaussian_blobs(n_per_class, n_features, n_classes, separation, std, seed):
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, 1.0, size=(n_classes, n_features))
    centers *= separation / np.linalg.norm(centers, axis=1, keepdims=True)
    features = np.vstack([
        rng.normal(centers[c], std, size=(n_per_class, n_features))
        for c in range(n_classes)
    ])
    return features, np.repeat(np.arange(n_classes), n_per_class)


def two_spirals(n_per_class, noise, seed):
    rng = np.random.default_rng(seed)
    t = np.sqrt(rng.uniform(0.05, 1.0, n_per_class)) * 3 * np.pi
    spiral = np.column_stack([t * np.cos(t), t * np.sin(t)]) / (3 * np.pi)
    features = np.vstack([spiral, -spiral])
    features += rng.normal(0, noise, features.shape)
    return features, np.repeat([0, 1], n_per_class)


def threshold_rules(n, n_features, n_classes, seed, depth=3, flip=0.04):
    """Labels from a random shallow axis-aligned decision tree, plus noise."""
    rng = np.random.default_rng(seed)
    features = rng.uniform(0, 1, size=(n, n_features))
    leaf = np.zeros(n, dtype=int)
    for d in range(depth):
        split_feat = rng.integers(0, n_features, size=2**d)
        split_thr = rng.uniform(0.25, 0.75, size=2**d)
        for node in range(2**d):
            mask = leaf == node
            right = features[mask][:, split_feat[node]] > split_thr[node]
            leaf[mask] = np.where(right, 2 * node + 1, 2 * node)
    labels = leaf % n_classes
    flips = rng.random(n) < flip
    labels[flips] = rng.integers(0, n_classes, size=int(flips.sum()))
    return features, labels


def interval_bands(n_per_class, n_features, n_classes, seed, noise):
    """Each class occupies one band of every feature's range (bands are
    permuted per feature), blurred by additive noise."""
    rng = np.random.default_rng(seed)
    edges = np.linspace(0, 1, n_classes + 1)
    band_of = np.stack([rng.permutation(n_classes) for _ in range(n_features)], axis=1)
    features = np.empty((n_per_class * n_classes, n_features))
    for c in range(n_classes):
        lo, hi = edges[band_of[c]], edges[band_of[c] + 1]
        block = rng.uniform(lo, hi, size=(n_per_class, n_features))
        features[c * n_per_class:(c + 1) * n_per_class] = block
    features += rng.normal(0, noise, features.shape)
    return features, np.repeat(np.arange(n_classes), n_per_class)


def ordinal_counts(n_per_class, n_features, n_classes, seed, lo=1.0, hi=7.0):
    """Integer count attributes with class-dependent Poisson rates."""
    rng = np.random.default_rng(seed)
    rates = rng.uniform(lo, hi, size=(n_classes, n_features))
    features = np.vstack([
        rng.poisson(rates[c], size=(n_per_class, n_features)).astype(float)
        for c in range(n_classes)
    ])
    return features, np.repeat(np.arange(n_classes), n_per_class)


def main(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []

    iris = load_iris()
    rows.append(write_csv(out_dir / "iris.csv", iris.data, iris.target,
                          names=list(iris.target_names)))
    wine = load_wine()
    rows.append(write_csv(out_dir / "wine.csv", wine.data, wine.target))
    cancer = load_breast_cancer()
    rows.append(write_csv(out_dir / "breast_cancer.csv", cancer.data, cancer.target))
    digits = load_digits()
    dig_x, dig_y = stratified_head(digits.data, digits.target, per_class=100, seed=7)
    rows.append(write_csv(out_dir / "digits1k.csv", dig_x, dig_y))

    x, y = gaussian_blobs(100, 4, 3, separation=3.0, std=1.0, seed=101)
    rows.append(write_csv(out_dir / "blobs3.csv", x, y))

    x, y = make_moons(n_samples=400, noise=0.25, random_state=103)
    rows.append(write_csv(out_dir / "moons.csv", x, y))

    x, y = make_circles(n_samples=400, noise=0.12, factor=0.5, random_state=104)
    rows.append(write_csv(out_dir / "circles.csv", x, y))

    x, y = two_spirals(n_per_class=200, noise=0.08, seed=107)
    rows.append(write_csv(out_dir / "spirals.csv", x, y))

    x, y = threshold_rules(420, 8, 3, seed=301, depth=3, flip=0.04)
    rows.append(write_csv(out_dir / "rules3.csv", x, y))

    x, y = interval_bands(100, 6, 4, seed=302, noise=0.20)
    rows.append(write_csv(out_dir / "bands4.csv", x, y))

    x, y = ordinal_counts(110, 8, 3, seed=201)
    rows.append(write_csv(out_dir / "ordinal3.csv", x, y))

    width = max(len(r["file"]) for r in rows)
    for r in rows:
        print(f"{r['file']:<{width}}  M={r['M']:<5} K={r['K']:<3} L={r['L']}")
    print(f"{len(rows)} datasets in {out_dir}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else OUT_DIR)
