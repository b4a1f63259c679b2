"""visualisation modules."""

from .plots import setup_matplotlib, save_figure
from .charts import plot_outage_curve, plot_resource_curve

__all__ = [
    "setup_matplotlib",
    "save_figure",
    "plot_outage_curve",
    "plot_resource_curve",
]
