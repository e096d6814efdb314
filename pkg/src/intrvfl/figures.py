"""Report figures rendered to files alongside the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .costs import CostProfile, InferenceCost
from .evaluation import ComparisonResult, EvalReport

FAMILY_LABELS = {"rvfl": "conventional RVFL", "intrvfl": "integer RVFL"}


def _label(family: str) -> str:
    return FAMILY_LABELS.get(family, family)


def save_accuracy_scatter(comparison: ComparisonResult, path: str | Path) -> Path:
    """Per-dataset accuracy of one model against the other; one point per
    dataset, diagonal marks parity."""
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.plot([0, 1], [0, 1], color="0.7", linewidth=1, zorder=1)
    ax.scatter(comparison.accuracies_a, comparison.accuracies_b,
               s=28, color="tab:blue", zorder=2)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel(f"{_label(comparison.label_a)} accuracy")
    ax.set_ylabel(f"{_label(comparison.label_b)} accuracy")
    r = comparison.pearson_r
    r_text = "n/a" if r is None else f"{r:.2f}"
    ax.set_title(
        f"means {comparison.mean_a:.3f} vs {comparison.mean_b:.3f}, r = {r_text}",
        fontsize=9,
    )
    ax.set_aspect("equal")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_readout_sweep(report: EvalReport, path: str | Path) -> Path:
    """Mean accuracy per integer-readout strategy against the boundary,
    with the real-readout mean as a horizontal reference."""
    strategies: dict[str, dict[int, float]] = {}
    real_mean = None
    for key in {s.strategy for s in report.sweep}:
        if key == "real":
            real_mean = report.sweep_mean("real")
            continue
        mode, boundary = key.rsplit(":", 1)
        strategies.setdefault(mode, {})[int(boundary)] = report.sweep_mean(key)

    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    if real_mean is not None:
        ax.axhline(real_mean, color="0.4", linestyle="-", linewidth=1,
                   label="real readout")
    styles = {"quantized": "--o", "ga": ":s", "ga-from-quantized": "-.^"}
    for mode, by_boundary in sorted(strategies.items()):
        boundaries = sorted(by_boundary)
        ax.plot(boundaries, [by_boundary[b] for b in boundaries],
                styles.get(mode, "-x"), label=mode)
    ax.set_xlabel("readout boundary (weights in [-B, B])")
    ax.set_ylabel("mean CV accuracy")
    ax.set_xscale("log", base=2)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_cost_breakdown(
    cost_a: InferenceCost,
    cost_b: InferenceCost,
    profile: CostProfile,
    path: str | Path,
) -> Path:
    """Stacked per-stage cost bars for two models under one profile."""
    stages = ["encoding", "hidden", "readout"]
    costs = [cost_a, cost_b]
    labels = [_label(c.family) for c in costs]
    bottoms = np.zeros(len(costs))
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    for stage in stages:
        heights = np.array([c.stage_total(profile, stage) for c in costs])
        ax.bar(labels, heights, bottom=bottoms, label=stage)
        bottoms += heights
    for i, c in enumerate(costs):
        ax.text(i, bottoms[i], f"{c.total:g}", ha="center", va="bottom", fontsize=8)
    ax.set_ylabel("abstract energy per inference")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
