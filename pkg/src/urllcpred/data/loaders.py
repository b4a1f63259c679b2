"""
CSV import and export.

Traces, decompositions, predictions and allocation records share one
format: ',' delimiter, '.' decimal point, LF line endings, UTF-8, and
floats written with 17 significant digits so they read back exactly.
"""

from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..core.channel import InterferenceTrace
from ..core.emd import ImfSet
from ..core.fbl import AllocationRecord, records_to_frame
from ..utils.logging_config import log
from .validators import InvalidArgumentError

FLOAT_FORMAT = "%.17g"


def write_frame(df: pd.DataFrame, path: Path) -> Path:
    """Write a DataFrame in the project CSV format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    log.debug(f"Wrote {len(df)} rows to {path}")
    return path


def read_frame(path: Path, required: Sequence[str]) -> pd.DataFrame:
    """
    Read a project CSV and check its columns.

    Args:
        path: CSV file.
        required: Columns that must be present.

    Returns:
        DataFrame.

    Raises:
        FileNotFoundError: If the file does not exist.
        InvalidArgumentError: If a required column is missing.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [col for col in required if col not in df.columns]
    if missing:
        raise InvalidArgumentError(f"{path} is missing columns {missing}")
    return df


def trace_to_frame(trace: InterferenceTrace) -> pd.DataFrame:
    """Columns t, total, i1..iN (per-interferer columns when recorded)."""
    data = {"t": np.arange(len(trace)), "total": trace.samples}
    if trace.per_interferer is not None:
        for i, row in enumerate(trace.per_interferer, start=1):
            data[f"i{i}"] = row
    return pd.DataFrame(data)


def save_trace(trace: InterferenceTrace, path: Path) -> Path:
    return write_frame(trace_to_frame(trace), path)


def load_trace(path: Path) -> InterferenceTrace:
    """
    Read a trace CSV written by ``save_trace``.

    Returns:
        InterferenceTrace; per-interferer powers are restored when the
        i1..iN columns are present.
    """
    df = read_frame(path, required=["t", "total"])
    columns = [c for c in df.columns if c.startswith("i") and c[1:].isdigit()]
    columns.sort(key=lambda c: int(c[1:]))
    per_interferer = df[columns].to_numpy().T if columns else None
    return InterferenceTrace(samples=df["total"].to_numpy(), per_interferer=per_interferer)


def decomposition_to_frame(total, imf_set: ImfSet) -> pd.DataFrame:
    """Columns t, total, imf1..imfK, residual."""
    frame = imf_set.to_frame()
    frame.insert(0, "total", np.asarray(total, dtype=float))
    frame.insert(0, "t", np.arange(imf_set.source_len))
    return frame


def save_decomposition(total, imf_set: ImfSet, path: Path) -> Path:
    return write_frame(decomposition_to_frame(total, imf_set), path)


def load_decomposition(path: Path) -> pd.DataFrame:
    return read_frame(path, required=["t", "total", "residual"])


def predictions_to_frame(results: Sequence, t_offset: Optional[int] = None) -> pd.DataFrame:
    """
    Columns t, actual, pred_<method> for a list of ForecastResults.

    All results must cover the same validation steps.
    """
    if not results:
        raise InvalidArgumentError("no forecasts to write")
    first = results[0]
    offset = first.t_offset if t_offset is None else t_offset
    data = {"t": np.arange(offset, offset + first.actual.size), "actual": first.actual}
    for result in results:
        if result.actual.size != first.actual.size:
            raise InvalidArgumentError("forecasts cover different validation lengths")
        data[result.method.column] = result.predictions
    return pd.DataFrame(data)


def save_predictions(results: Sequence, path: Path) -> Path:
    return write_frame(predictions_to_frame(results), path)


def load_predictions(path: Path) -> pd.DataFrame:
    """Prediction CSV; at least one ``pred_*`` column is required."""
    df = read_frame(path, required=["t", "actual"])
    if not any(c.startswith("pred_") for c in df.columns):
        raise InvalidArgumentError(f"{path} has no pred_* columns")
    return df


def save_allocations(records: Sequence[AllocationRecord], method: str, path: Path) -> Path:
    """Allocation records of one method and target, with a leading method column."""
    frame = records_to_frame(records)
    frame.insert(0, "method", method)
    return write_frame(frame, path)
