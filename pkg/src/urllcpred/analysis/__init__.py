"""Analysis modules."""

from .statistics import ExperimentReport, build_report, compute_curves, compute_rmse_table
from .report import emit_report

__all__ = [
    "ExperimentReport",
    "build_report",
    "compute_curves",
    "compute_rmse_table",
    "emit_report",
]
