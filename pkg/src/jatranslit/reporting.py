"""Report figures. Rendered off-screen with the Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .corpus import LabelStats  # noqa: E402

# fixed metadata keeps PNG output byte-stable across runs
_PNG_META = {"Software": None}

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.titlesize": 10,
    "savefig.dpi": 150,
}


def plot_label_distribution(stats: LabelStats, path: str | Path) -> Path:
    names = ["JA", "Hebrew", "punctuation"]
    counts = [stats.ja, stats.hebrew, stats.punctuation]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 2.6))
        bars = ax.bar(names, counts, color=["#4c72b0", "#dd8452", "#8c8c8c"])
        for bar, n in zip(bars, counts):
            ax.annotate(f"{n:,}\n{stats.percent(n):.2f}%", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                        ha="center", va="bottom", fontsize=7)
        ax.set_ylabel("tokens")
        ax.set_title(f"Source token labels ({stats.tokens:,} tokens)")
        ax.set_ylim(0, max(counts + [1]) * 1.25)
        fig.tight_layout()
        fig.savefig(path, metadata=_PNG_META)
        plt.close(fig)
    return Path(path)


def plot_scores(summary: dict, path: str | Path) -> Path:
    """Bar chart of transliteration accuracy and post-correction P/R/F1/F0.5/Acc."""
    labels, values = [], []
    for mode, rep in summary["transliteration"].items():
        if rep and rep.get("accuracy") is not None:
            labels.append(f"acc\n{mode}")
            values.append(rep["accuracy"])
    corr = summary["correction"]
    for key, name in (("precision", "P"), ("recall", "R"), ("f1", "F1"), ("f_half", "F0.5"), ("accuracy", "Acc")):
        if corr.get(key) is not None:
            labels.append(name)
            values.append(corr[key])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 2.6))
        n_translit = sum(1 for lab in labels if lab.startswith("acc\n"))
        colors = ["#55a868"] * n_translit + ["#4c72b0"] * (len(labels) - n_translit)
        bars = ax.bar(range(len(values)), values, color=colors)
        ax.set_xticks(range(len(values)), labels)
        for bar, v in zip(bars, values):
            ax.annotate(f"{v:.1f}", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                        ha="center", va="bottom", fontsize=7)
        ax.set_ylim(0, 110)
        ax.set_ylabel("%")
        ax.set_title(f"Scores ({summary['mode']} input, backend: {summary['backend'] or 'none'})")
        fig.tight_layout()
        fig.savefig(path, metadata=_PNG_META)
        plt.close(fig)
    return Path(path)
