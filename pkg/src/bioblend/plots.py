"""Figures for the validation report."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .evaluate import F_SENTINEL, anova_f_scores  # noqa: E402


def plot_screening_curve(report, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for n in report.neighbors:
        curve = report.accuracy[n]
        line, = ax.plot(list(curve), list(curve.values()), marker="o", label=f"top-k, {n}-NN")
        ax.axhline(report.unreduced[n], color=line.get_color(), ls="--", lw=1,
                   label=f"all features, {n}-NN")
        if report.true_features is not None:
            ax.axhline(report.true_features[n], color=line.get_color(), ls=":", lw=1,
                       label=f"true hidden, {n}-NN")
    ax.axhline(report.chance, color="grey", lw=0.8, label="chance")
    ax.set_xscale("log")
    ax.set_xlabel("number of selected features k")
    ax.set_ylabel("cross-validated accuracy")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_f_scores(report, path):
    scores = np.asarray(report.f_scores)
    finite = scores[(scores > 0) & (scores < F_SENTINEL)]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(np.log10(finite), bins=50, color="C0")
    ax.set_xlabel("log10 ANOVA F-score (visible features)")
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_usefulness(bundle, path):
    """Hidden-feature usefulness against the F-score it actually achieves."""
    scores = anova_f_scores(bundle.hidden, bundle.labels)
    fig, ax = plt.subplots(figsize=(6, 4))
    mask = bundle.true_mask
    ax.scatter(bundle.usefulness[mask], scores[mask], s=12, label="true")
    ax.scatter(bundle.usefulness[~mask], scores[~mask], s=12, label="fake", alpha=0.5)
    ax.set_yscale("log")
    ax.set_xlabel("usefulness")
    ax.set_ylabel("ANOVA F-score (hidden feature)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def render_report(report, bundle, directory, prefix: str = "") -> list[Path]:
    """Write the report figures as PNG files into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = [
        plot_screening_curve(report, directory / f"{prefix}screening_curve.png"),
        plot_f_scores(report, directory / f"{prefix}f_scores.png"),
    ]
    if bundle.hidden is not None:
        paths.append(plot_usefulness(bundle, directory / f"{prefix}usefulness.png"))
    return paths
