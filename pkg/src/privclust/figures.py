"""Box-plot rendering for benchmark score distributions (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_score_boxplot(scores_by_method: dict, path, metric: str = "NMI", title: str = "") -> None:
    """One box per method over its per-run scores, written to an image file."""
    if not scores_by_method:
        raise ValueError("no scores to plot")
    names = list(scores_by_method)
    data = [list(scores_by_method[name]) for name in names]
    fig, ax = plt.subplots(figsize=(max(6.0, 1.1 * len(names) + 2.0), 4.5))
    ax.boxplot(data)
    ax.set_xticks(range(1, len(names) + 1))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylabel(f"{metric} vs true classes")
    if title:
        ax.set_title(title)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": "privclust"})
    plt.close(fig)
