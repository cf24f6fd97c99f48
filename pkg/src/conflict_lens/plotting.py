"""Matplotlib figures for the evaluation tables, written next to the TSV output."""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .engine import CLASS_ORDER  # noqa: E402

CLASS_COLORS = {"Strong": "#b2182b", "Tau": "#ef8a62", "Weak": "#67a9cf", "None": "#999999"}
# distinct markers and dashes keep coincident recall curves visible
CLASS_STYLES = {"Strong": ("o", "-"), "Tau": ("s", "--"), "Weak": ("^", "-."), "None": ("x", ":")}


def new_figure(width=6.0, height=None):
    golden = (5 ** 0.5 - 1) / 2
    fig, ax = plt.subplots(figsize=(width, height or width * golden))
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.tick_params(labelsize=9)
    return fig, ax


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.tight_layout()
    # no timestamp metadata so reruns overwrite identically
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_metrics(metrics, path):
    names = ("precision", "recall", "f1", "accuracy")
    fig, ax = new_figure()
    width = 0.2
    for j, name in enumerate(names):
        vals = [getattr(metrics.per_class[c], name) for c in CLASS_ORDER]
        xs = [i + (j - 1.5) * width for i in range(len(CLASS_ORDER))]
        ax.bar(xs, [v if v is not None else 0.0 for v in vals], width, label=name)
    ax.set_xticks(range(len(CLASS_ORDER)))
    ax.set_xticklabels([c.value for c in CLASS_ORDER])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.legend(fontsize=8, frameon=False, ncol=4, loc="upper center", bbox_to_anchor=(0.5, 1.15))
    return _save(fig, path)


def plot_sweep(rows, path):
    fig, ax = new_figure()
    mus = [r.mu for r in rows]
    for c in CLASS_ORDER:
        ys = [r.recall[c] for r in rows]
        if all(y is None for y in ys):
            continue
        marker, dash = CLASS_STYLES[c.value]
        ax.plot(mus, [y if y is not None else float("nan") for y in ys], marker=marker,
                linestyle=dash, color=CLASS_COLORS[c.value], label=c.value, alpha=0.85)
    ax.set_xlabel("proximity threshold mu")
    ax.set_ylabel("recall")
    ax.set_ylim(-0.02, 1.05)
    ax.legend(fontsize=8, frameon=False)
    return _save(fig, path)


def plot_scale(rows, path):
    fig, ax = new_figure()
    xs = [str(r.residents) for r in rows]
    bottom = [0] * len(rows)
    for c in CLASS_ORDER[:3]:
        ys = [r.by_class[c] for r in rows]
        ax.bar(xs, ys, bottom=bottom, color=CLASS_COLORS[c.value], label=c.value)
        bottom = [b + y for b, y in zip(bottom, ys)]
    ax.set_xlabel("residents")
    ax.set_ylabel("conflicts")
    ax.legend(fontsize=8, frameon=False)
    return _save(fig, path)
