"""Channel simulation, decomposition and finite-blocklength allocation.

The experiment pipeline lives in ``urllcpred.core.processors`` and is
imported explicitly, since it depends on the forecasting package.
"""

from .channel import (
    DesiredTrace,
    InterferenceTrace,
    gen_block_rayleigh_powers,
    gen_desired_trace,
    gen_interference_trace,
)
from .emd import ImfSet, InsufficientExtremaError, decompose, envelopes, find_extrema, sift_one_imf
from .fbl import (
    AllocationRecord,
    NoCapacityError,
    achievable_bits,
    achieved_error,
    allocate_series,
    channel_dispersion,
    q_function,
    q_inv,
    required_channel_uses,
    shannon_capacity,
    sinr,
)
from .metrics import rmse, summarise_allocation

__all__ = [
    "DesiredTrace",
    "InterferenceTrace",
    "gen_block_rayleigh_powers",
    "gen_desired_trace",
    "gen_interference_trace",
    "ImfSet",
    "InsufficientExtremaError",
    "decompose",
    "envelopes",
    "find_extrema",
    "sift_one_imf",
    "AllocationRecord",
    "NoCapacityError",
    "achievable_bits",
    "achieved_error",
    "allocate_series",
    "channel_dispersion",
    "q_function",
    "q_inv",
    "required_channel_uses",
    "shannon_capacity",
    "sinr",
    "rmse",
    "summarise_allocation",
]
