"""Static bar charts for the result tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import ResultTable


def bar_chart(table: ResultTable, path: str, title: str) -> None:
    """One horizontal bar group per row, one colour per value column."""
    labels = [str(row[0]) for row in table.rows]
    value_names = table.names[1:]
    height = 0.8 / len(value_names)
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.35 * len(labels) + 1)))
    base = np.arange(len(labels))[::-1]
    for k, name in enumerate(value_names):
        vals = [float(row[1 + k]) for row in table.rows]
        ax.barh(base - k * height, vals, height=height, label=name)
    ax.set_yticks(base - 0.4 + height / 2)
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_title(title)
    if len(value_names) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
