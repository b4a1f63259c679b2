"""
Comparison predictors: first-order IIR smoothing and the genie.
"""

import numpy as np
from scipy.signal import lfilter

from ..config import IirParams, TrainValSplit
from ..data.validators import validate_series


def iir_filter(series, params: IirParams = IirParams()) -> np.ndarray:
    """
    Causal IIR estimates for every sample of a series.

    The estimate for step t is I_hat[t] = alpha * I[t-1] + (1 - alpha) * I_hat[t-1],
    started from ``init_estimate`` (the first sample by default). With
    ``literal_index`` the measurement fed in is I[t-2].

    Args:
        series: Non-negative interference powers.
        params: Forgetting factor and start value.

    Returns:
        Length-T estimates; element t uses only samples before t.
    """
    x = validate_series(series, name="series", non_negative=True)
    init = float(x[0]) if params.init_estimate is None else float(params.init_estimate)
    alpha = params.alpha

    # measurement entering the update that produces estimate t + 1
    inputs = x[:-1]
    if params.literal_index:
        inputs = np.concatenate(([init], x[:-2]))

    smoothed, _ = lfilter([alpha], [1.0, alpha - 1.0], inputs, zi=[(1.0 - alpha) * init])
    return np.concatenate(([init], smoothed))


def iir_forecast(series, split: TrainValSplit, params: IirParams = IirParams()) -> np.ndarray:
    """
    IIR estimates aligned with the validation steps P..T-1.

    The filter runs over the whole trace, so the training region serves as
    warm-up.
    """
    x = validate_series(series, name="series", non_negative=True)
    split.validate_for(x.size)
    return iir_filter(x, params)[split.train_len:]


def genie_forecast(series, split: TrainValSplit) -> np.ndarray:
    """The realised validation samples (perfect interference knowledge)."""
    x = validate_series(series, name="series")
    split.validate_for(x.size)
    return x[split.train_len:].copy()
