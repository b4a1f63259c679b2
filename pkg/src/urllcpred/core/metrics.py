"""
Prediction and allocation metrics.
"""

from typing import Dict, Sequence

import numpy as np

from ..data.validators import InvalidArgumentError, check_same_length, validate_series
from .fbl import AllocationRecord

# relative slack for achieved == target up to rounding
VIOLATION_RTOL = 1e-9


def rmse(pred, actual) -> float:
    """
    Root mean squared error between a prediction and the observed values.

    Args:
        pred: Predicted values.
        actual: Observed values, same length.

    Returns:
        sqrt(mean((pred - actual)^2)).
    """
    p = validate_series(pred, name="pred")
    a = validate_series(actual, name="actual")
    check_same_length(p, a, names=("pred", "actual"))
    return float(np.sqrt(np.mean((p - a) ** 2)))


def summarise_allocation(records: Sequence[AllocationRecord]) -> Dict[str, float]:
    """
    Step-averaged outcome of one allocation run.

    Returns:
        Dict with mean_achieved_eps, mean_channel_uses, violation_rate
        (share of steps whose achieved error exceeds the target by more than
        VIOLATION_RTOL) and n_steps.
    """
    if not records:
        raise InvalidArgumentError("no allocation records to summarise")
    achieved = np.array([r.achieved_eps for r in records])
    uses = np.array([r.channel_uses for r in records])
    target = records[0].target_eps
    return {
        "mean_achieved_eps": float(np.mean(achieved)),
        "mean_channel_uses": float(np.mean(uses)),
        "violation_rate": float(np.mean(achieved > target * (1.0 + VIOLATION_RTOL))),
        "n_steps": len(records),
    }
