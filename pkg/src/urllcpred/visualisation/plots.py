"""
Base plotting utilities.

Common setup and helper functions for matplotlib. Figures are rendered
with the non-interactive Agg backend and saved as byte-stable SVG: the
element-id hash salt is fixed and no creation date is written.
"""

from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..utils.logging_config import log  # noqa: E402

SVG_HASH_SALT = "urllcpred"
SVG_METADATA = {"Date": None, "Creator": None}


def setup_matplotlib(figsize: tuple = (7, 5)) -> tuple:
    """
    Setup matplotlib figure and axis.

    Args:
        figsize: Figure size as (width, height).

    Returns:
        Tuple of (figure, axis).
    """
    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=figsize)
    return fig, ax


def save_figure(
    fig,
    filename: str,
    output_dir: Optional[Path] = None,
) -> Path:
    """
    Save figure as SVG.

    Args:
        fig: Matplotlib figure.
        filename: Output filename.
        output_dir: Output directory. If None, uses current directory.

    Returns:
        Path to saved file.
    """
    if output_dir:
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        filepath = output_dir / filename
    else:
        filepath = Path(filename)

    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig.savefig(filepath, format="svg", metadata=SVG_METADATA)
    log.info(f"Saved figure: {filepath}")

    return filepath


def close_figure(fig):
    """Close figure to free memory."""
    plt.close(fig)
