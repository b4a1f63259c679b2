"""
Autoregressive integrated predictor.

ARIMA(p, d, 0) fitted by ordinary least squares on the d-times differenced
series; forecasts are integrated back to the original level.
"""

from dataclasses import dataclass

import numpy as np

from ..config import ArimaSpec
from ..data.validators import InvalidArgumentError, validate_series
from ..utils.logging_config import log

RIDGE_LAMBDA = 1e-8


@dataclass(frozen=True)
class ArimaModel:
    """Fitted coefficients plus the state needed for a one-step forecast."""
    spec: ArimaSpec
    coefficients: np.ndarray     # lag 1 first
    mean: float                  # of the differenced series; 0 unless d == 0
    recent_diffs: np.ndarray     # last p differenced values, oldest first
    level_tails: tuple           # last value of each differencing order 0..d-1
    regularised: bool = False


def _difference(series: np.ndarray, d: int):
    tails = []
    x = series
    for _ in range(d):
        tails.append(float(x[-1]))
        x = np.diff(x)
    return x, tuple(tails)


def fit_ar(series, spec: ArimaSpec = ArimaSpec()) -> ArimaModel:
    """
    Fit AR(p) coefficients to the differenced series.

    The regression targets are the most recent ``spec.window`` differenced
    samples (all of them when window is None), each regressed on its p
    predecessors. A rank-deficient design falls back to a ridge solve with
    lambda = 1e-8, recorded in ``ArimaModel.regularised``.

    Args:
        series: History to fit on.
        spec: Model orders and window.

    Returns:
        ArimaModel.

    Raises:
        InvalidArgumentError: If the history is too short or q > 0.
    """
    if spec.q > 0:
        raise InvalidArgumentError("moving-average terms (q > 0) are not supported")
    x = validate_series(series, name="series", min_length=spec.min_history)

    diffs, tails = _difference(x, spec.d)
    mean = float(np.mean(diffs[-(spec.window or diffs.size):])) if spec.d == 0 else 0.0
    z = diffs - mean

    p = spec.p
    n_rows = z.size - p if spec.window is None else spec.window
    if p == 0:
        return ArimaModel(spec, np.zeros(0), mean, np.zeros(0), tails)

    targets = z[-n_rows:]
    # column j holds lag j+1 of each target
    design = np.column_stack([z[z.size - n_rows - j - 1: z.size - j - 1] for j in range(p)])

    regularised = np.linalg.matrix_rank(design) < p
    if regularised:
        gram = design.T @ design + RIDGE_LAMBDA * np.eye(p)
        coefficients = np.linalg.solve(gram, design.T @ targets)
        log.debug(f"rank-deficient AR({p}) design; ridge fallback applied")
    else:
        coefficients = np.linalg.lstsq(design, targets, rcond=None)[0]

    return ArimaModel(
        spec=spec,
        coefficients=coefficients,
        mean=mean,
        recent_diffs=z[-p:].copy(),
        level_tails=tails,
        regularised=bool(regularised),
    )


def predict_one_ar(model: ArimaModel) -> float:
    """
    One-step-ahead forecast at the original level.

    Args:
        model: Fitted model.

    Returns:
        Forecast of the next sample.
    """
    lags = model.recent_diffs[::-1]
    value = float(np.dot(model.coefficients, lags)) + model.mean
    # undo each differencing, innermost order first
    for tail in reversed(model.level_tails):
        value += tail
    return value
