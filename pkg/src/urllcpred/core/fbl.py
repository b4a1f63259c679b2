"""
Finite-blocklength resource allocation.

Normal approximation of the maximal coding rate over AWGN, with the
O(log2 R) term dropped everywhere:

    D = R C(g) - Qinv(eps) sqrt(R V(g))

``required_channel_uses`` is its closed-form inverse in R and
``achieved_error`` its inverse in eps.
"""

import math
from dataclasses import asdict, dataclass
from typing import List, Sequence

import numpy as np
import pandas as pd
from scipy.special import erfc

from ..data.validators import (
    InvalidArgumentError,
    check_count,
    check_non_negative,
    check_positive,
    check_probability,
    validate_series,
)
from ..utils.logging_config import log

LN2 = math.log(2.0)

# Acklam's rational approximation of the standard normal quantile
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


class NoCapacityError(InvalidArgumentError):
    """Allocation requested for a link with zero SINR."""
    pass


@dataclass(frozen=True)
class AllocationRecord:
    """One allocation decision and its outcome at step t."""
    t: int
    predicted_interference: float
    predicted_sinr: float
    channel_uses: float
    target_eps: float
    actual_interference: float
    actual_sinr: float
    achieved_eps: float


def q_function(x):
    """Gaussian tail probability Q(x) = P(Z > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def _normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _lower_quantile(p: float) -> float:
    """Acklam's approximation of Phi^-1(p) for 0 < p <= 0.5."""
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def q_inv(eps: float) -> float:
    """
    Inverse Q-function: x with Q(x) = eps.

    Rational approximation of the normal quantile followed by one Newton
    step on Q(x) - eps. The upper half is mirrored, Qinv(eps) = -Qinv(1 - eps),
    so the refinement always runs in the accurate small-tail regime.

    Args:
        eps: Tail probability in (0, 1).

    Returns:
        The tail quantile.
    """
    check_probability("eps", eps)
    if eps > 0.5:
        return -q_inv(1.0 - eps)
    if eps == 0.5:
        return 0.0

    # Phi^-1(eps) is the negated tail quantile
    x = -_lower_quantile(eps)
    x += (float(q_function(x)) - eps) / _normal_pdf(x)
    return x


def shannon_capacity(gamma: float) -> float:
    """C(g) = log2(1 + g) bits per channel use."""
    check_non_negative("gamma", gamma)
    return math.log2(1.0 + gamma)


def channel_dispersion(gamma: float) -> float:
    """V(g) = (1 - 1/(1+g)^2) / ln(2)^2, squared bits per channel use."""
    check_non_negative("gamma", gamma)
    return (1.0 - 1.0 / (1.0 + gamma) ** 2) / LN2 ** 2


def sinr(S: float, I: float, N0: float) -> float:
    """S / (I + N0)."""
    check_non_negative("S", S)
    check_non_negative("I", I)
    if not N0 > 0:
        raise InvalidArgumentError(f"N0 must be > 0, got {N0!r}")
    return S / (I + N0)


def required_channel_uses(D: float, gamma_hat: float, eps: float) -> float:
    """
    Channel uses needed to carry D bits at error probability eps.

    Closed-form inverse of the normal approximation in R. For eps >= 0.5 the
    quantile is non-positive and the dispersion term is taken as zero, so
    R = D / C.

    Args:
        D: Payload in bits (>= 1).
        gamma_hat: Predicted SINR (linear, > 0).
        eps: Target error probability in (0, 1).

    Returns:
        Real-valued R.

    Raises:
        NoCapacityError: If gamma_hat is 0.
    """
    if not D >= 1:
        raise InvalidArgumentError(f"D must be >= 1, got {D!r}")
    check_non_negative("gamma_hat", gamma_hat)
    if gamma_hat == 0:
        raise NoCapacityError("gamma_hat = 0: the link has no capacity")
    check_probability("eps", eps)

    C = shannon_capacity(gamma_hat)
    if eps >= 0.5:
        return D / C

    qv = q_inv(eps) ** 2 * channel_dispersion(gamma_hat)
    return D / C + qv / (2.0 * C ** 2) * (1.0 + math.sqrt(1.0 + 4.0 * D * C / qv))


def achievable_bits(R: float, gamma: float, eps: float) -> float:
    """
    Bits carried by R channel uses at SINR gamma and error probability eps.

    May be negative for very small R; callers clamp.
    """
    check_positive("R", R)
    check_non_negative("gamma", gamma)
    check_probability("eps", eps)
    return R * shannon_capacity(gamma) - q_inv(eps) * math.sqrt(R * channel_dispersion(gamma))


def achieved_error(R: float, D: float, gamma_actual: float) -> float:
    """
    Error probability actually obtained with R channel uses at SINR gamma.

    eps = Q((R C(g) - D) / sqrt(R V(g))), with g = 0 treated as certain
    failure. Clamped to [0, 1].
    """
    check_positive("R", R)
    if not D >= 1:
        raise InvalidArgumentError(f"D must be >= 1, got {D!r}")
    check_non_negative("gamma_actual", gamma_actual)
    if gamma_actual == 0:
        return 1.0

    margin = R * shannon_capacity(gamma_actual) - D
    spread = math.sqrt(R * channel_dispersion(gamma_actual))
    return float(np.clip(q_function(margin / spread), 0.0, 1.0))


def allocate_series(
    predicted_interference: Sequence[float],
    actual_interference: Sequence[float],
    signal_power,
    noise_power: float,
    payload_bits: int,
    target_eps: float,
    integer_R: bool = False,
    t_offset: int = 0,
) -> List[AllocationRecord]:
    """
    Allocate and evaluate every step of a validation window.

    At each step the predicted interference fixes gamma_hat and R; the
    realised interference then gives gamma and the achieved error.
    Negative predictions are clamped to zero interference.

    Args:
        predicted_interference: Length-M predicted powers.
        actual_interference: Length-M realised powers.
        signal_power: Scalar S or length-M desired powers.
        noise_power: N0.
        payload_bits: D.
        target_eps: Target error probability.
        integer_R: Round R up to whole channel uses.
        t_offset: Time index of the first step.

    Returns:
        One AllocationRecord per step.
    """
    predicted = validate_series(predicted_interference, name="predicted_interference")
    actual = validate_series(actual_interference, name="actual_interference", non_negative=True)
    if predicted.size != actual.size:
        raise InvalidArgumentError(
            f"length mismatch: {predicted.size} predictions for {actual.size} observations"
        )
    signal = np.broadcast_to(np.asarray(signal_power, dtype=float), predicted.shape)
    check_count("payload_bits", payload_bits)
    check_probability("target_eps", target_eps)

    clamped = int(np.count_nonzero(predicted < 0))
    if clamped:
        log.warning(f"clamped {clamped} negative interference predictions to 0")
    predicted = np.maximum(predicted, 0.0)

    records = []
    for k in range(predicted.size):
        gamma_hat = sinr(signal[k], predicted[k], noise_power)
        R = required_channel_uses(payload_bits, gamma_hat, target_eps)
        if integer_R:
            R = float(math.ceil(R))
        gamma = sinr(signal[k], actual[k], noise_power)
        records.append(AllocationRecord(
            t=t_offset + k,
            predicted_interference=float(predicted[k]),
            predicted_sinr=gamma_hat,
            channel_uses=R,
            target_eps=target_eps,
            actual_interference=float(actual[k]),
            actual_sinr=gamma,
            achieved_eps=achieved_error(R, payload_bits, gamma),
        ))
    return records


def records_to_frame(records: Sequence[AllocationRecord]) -> pd.DataFrame:
    """AllocationRecords as a DataFrame, one row per step."""
    columns = list(AllocationRecord.__dataclass_fields__)
    return pd.DataFrame([asdict(r) for r in records], columns=columns)
