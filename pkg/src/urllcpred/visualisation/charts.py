"""
Chart plotting functions.

Achieved outage against target error rate, and channel uses against
target error rate, one line per method.
"""

from pathlib import Path
from typing import Optional

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from .plots import close_figure, save_figure, setup_matplotlib

MARKERS = ("o", "s", "^", "v", "D", "x", "*")


def _plot_lines(ax, curve: pd.DataFrame, column: str) -> None:
    for idx, (method, rows) in enumerate(curve.groupby("method", sort=False)):
        ax.plot(
            rows["target_eps"],
            rows[column],
            marker=MARKERS[idx % len(MARKERS)],
            label=method,
        )


def plot_outage_curve(
    outage_curve: pd.DataFrame,
    output_dir: Optional[Path] = None,
    save: bool = True,
    show: bool = False
) -> plt.Figure:
    """
    Plot achieved vs target error rate on log-log axes.

    The dashed diagonal marks achieved = target, the allocation that meets
    every target exactly.

    Args:
        outage_curve: Report table with method, target_eps, mean_achieved_eps.
        output_dir: Directory to save ``outage.svg``.
        save: Whether to save the plot.
        show: Whether to keep the figure open.

    Returns:
        Matplotlib figure.
    """
    fig, ax = setup_matplotlib()

    targets = np.sort(outage_curve["target_eps"].unique())
    ax.plot(targets, targets, linestyle="--", color="black", linewidth=1, label="target")
    _plot_lines(ax, outage_curve, "mean_achieved_eps")

    ax.set_xscale("log")
    # zero achieved error is masked on the log axis
    ax.set_yscale("log", nonpositive="mask")
    ax.set_xlabel("Target error probability")
    ax.set_ylabel("Achieved error probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()

    if save and output_dir:
        save_figure(fig, "outage.svg", output_dir)

    if not show:
        close_figure(fig)

    return fig


def plot_resource_curve(
    resource_curve: pd.DataFrame,
    output_dir: Optional[Path] = None,
    save: bool = True,
    show: bool = False
) -> plt.Figure:
    """
    Plot mean channel uses vs target error rate.

    Args:
        resource_curve: Report table with method, target_eps, mean_channel_uses.
        output_dir: Directory to save ``resources.svg``.
        save: Whether to save the plot.
        show: Whether to keep the figure open.

    Returns:
        Matplotlib figure.
    """
    fig, ax = setup_matplotlib()
    _plot_lines(ax, resource_curve, "mean_channel_uses")

    ax.set_xscale("log")
    ax.set_xlabel("Target error probability")
    ax.set_ylabel("Mean channel uses")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()

    if save and output_dir:
        save_figure(fig, "resources.svg", output_dir)

    if not show:
        close_figure(fig)

    return fig
