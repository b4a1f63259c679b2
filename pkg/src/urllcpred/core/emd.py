"""
Empirical mode decomposition.

Sifting with natural cubic spline envelopes through mirror-extended
extrema. The decomposition is exact by construction: each IMF is subtracted
from the running remainder, so IMFs plus residual telescope back to the
input up to rounding.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from ..config import SiftParams
from ..data.validators import InvalidArgumentError, validate_series
from ..utils.logging_config import log


class InsufficientExtremaError(InvalidArgumentError):
    """The signal is monotone or has too few extrema to build envelopes."""
    pass


@dataclass(frozen=True)
class ImfSet:
    """Ordered IMFs (fastest first) plus the residual of one decomposition."""
    imfs: List[np.ndarray]
    residual: np.ndarray
    source_len: int
    sift_iterations: List[int] = field(default_factory=list)

    @property
    def n_components(self) -> int:
        """L: IMFs plus residual."""
        return len(self.imfs) + 1

    @property
    def component_names(self) -> List[str]:
        return [f"imf{i}" for i in range(1, len(self.imfs) + 1)] + ["residual"]

    def components(self) -> List[np.ndarray]:
        """IMFs followed by the residual."""
        return list(self.imfs) + [self.residual]

    def reconstruct(self) -> np.ndarray:
        total = np.array(self.residual, dtype=float)
        for imf in self.imfs:
            total = total + imf
        return total

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(dict(zip(self.component_names, self.components())))


def find_extrema(signal) -> Tuple[np.ndarray, np.ndarray]:
    """
    Strict interior local maxima and minima.

    Runs of equal values are treated as one plateau reported at its midpoint
    index (lower midpoint for even-length plateaus).

    Args:
        signal: 1-D signal with at least 3 samples.

    Returns:
        (maxima indices, minima indices), both ascending.
    """
    x = validate_series(signal, name="signal", min_length=3)

    change = np.flatnonzero(np.diff(x) != 0) + 1
    starts = np.concatenate(([0], change))
    ends = np.concatenate((change - 1, [x.size - 1]))
    if starts.size < 3:
        empty = np.array([], dtype=int)
        return empty, empty.copy()

    values = x[starts]
    prev, cur, nxt = values[:-2], values[1:-1], values[2:]
    mid = (starts[1:-1] + ends[1:-1]) // 2
    maxima = mid[(cur > prev) & (cur > nxt)]
    minima = mid[(cur < prev) & (cur < nxt)]
    return maxima.astype(int), minima.astype(int)


def count_zero_crossings(signal) -> int:
    """Sign changes, with exact zeros absorbed into the preceding sign."""
    x = np.asarray(signal, dtype=float)
    signs = np.sign(x)
    nonzero = signs[signs != 0]
    if nonzero.size < 2:
        return 0
    return int(np.count_nonzero(nonzero[1:] != nonzero[:-1]))


def is_imf(signal) -> bool:
    """Extrema and zero-crossing counts differ by at most one."""
    maxima, minima = find_extrema(signal)
    return abs(maxima.size + minima.size - count_zero_crossings(signal)) <= 1


def _mirror_knots(indices: np.ndarray, values: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Reflect the two extrema nearest each end about that endpoint."""
    left = indices[:2]
    right = indices[-2:]
    knots_t = np.concatenate((-left[::-1], indices, 2 * (n - 1) - right[::-1]))
    knots_v = np.concatenate((values[left][::-1], values[indices], values[right][::-1]))
    # a single extremum is mirrored onto both sides; drop coincident knots
    knots_t, unique = np.unique(knots_t, return_index=True)
    return knots_t.astype(float), knots_v[unique]


def _interpolate(knots_t: np.ndarray, knots_v: np.ndarray, n: int) -> np.ndarray:
    t = np.arange(n, dtype=float)
    if knots_t.size < 3:
        return np.interp(t, knots_t, knots_v)
    return CubicSpline(knots_t, knots_v, bc_type="natural")(t)


def envelopes(signal, params: SiftParams = SiftParams()) -> Tuple[np.ndarray, np.ndarray]:
    """
    Upper and lower spline envelopes.

    Args:
        signal: 1-D signal.
        params: Sifting parameters (boundary and spline choice).

    Returns:
        (upper, lower). The splines may cross; that is accepted.

    Raises:
        InsufficientExtremaError: If there is no interior maximum or minimum.
    """
    x = validate_series(signal, name="signal", min_length=3)
    maxima, minima = find_extrema(x)
    if maxima.size == 0 or minima.size == 0:
        raise InsufficientExtremaError(
            f"need interior maxima and minima, found {maxima.size} and {minima.size}"
        )

    upper = _interpolate(*_mirror_knots(maxima, x, x.size), x.size)
    lower = _interpolate(*_mirror_knots(minima, x, x.size), x.size)
    return upper, lower


def _has_enough_extrema(x: np.ndarray) -> bool:
    maxima, minima = find_extrema(x)
    return maxima.size + minima.size >= 2 and maxima.size > 0 and minima.size > 0


def sift_one_imf(signal, params: SiftParams = SiftParams()) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Extract one intrinsic mode function.

    Iterates h <- h - (upper + lower) / 2 until the standard-deviation
    criterion sum((h_prev - h)^2) / sum(h_prev^2) < sd_threshold holds and h
    satisfies the extrema/zero-crossing condition, or ``max_sift_iters``
    is reached.

    Args:
        signal: 1-D signal that is not monotone.
        params: Sifting parameters.

    Returns:
        (imf, remainder, iterations) with remainder = signal - imf.

    Raises:
        InsufficientExtremaError: If the signal is monotone.
    """
    x = validate_series(signal, name="signal", min_length=3)
    if not _has_enough_extrema(x):
        raise InsufficientExtremaError("signal is monotone or has fewer than 2 extrema")

    h = x.copy()
    iterations = 0
    for iterations in range(1, params.max_sift_iters + 1):
        try:
            upper, lower = envelopes(h, params)
        except InsufficientExtremaError:
            break
        h_next = h - 0.5 * (upper + lower)

        denom = float(np.sum(h * h))
        sd = float(np.sum((h - h_next) ** 2)) / denom if denom > 0 else 0.0
        h = h_next
        if sd < params.sd_threshold and is_imf(h):
            break
    else:
        log.warning(f"sifting stopped at max_sift_iters={params.max_sift_iters}")

    return h, x - h, iterations


def decompose(signal, params: SiftParams = SiftParams()) -> ImfSet:
    """
    Decompose a signal into IMFs and a residual.

    The number of IMFs is data dependent: sifting continues on the remainder
    until it is monotone (fewer than two extrema) or ``max_imfs`` IMFs have
    been extracted.

    Args:
        signal: 1-D signal with at least 4 samples.
        params: Sifting parameters.

    Returns:
        ImfSet whose components sum to the input.
    """
    x = validate_series(signal, name="signal", min_length=4)

    imfs: List[np.ndarray] = []
    iterations: List[int] = []
    remainder = x.copy()
    while len(imfs) < params.max_imfs:
        try:
            imf, remainder_next, n_iter = sift_one_imf(remainder, params)
        except InsufficientExtremaError:
            break
        imfs.append(imf)
        iterations.append(n_iter)
        remainder = remainder_next
    else:
        if _has_enough_extrema(remainder):
            log.warning(f"decomposition stopped at max_imfs={params.max_imfs}")

    log.debug(f"decomposed {x.size} samples into {len(imfs)} IMFs, sift iterations {iterations}")
    return ImfSet(imfs=imfs, residual=remainder, source_len=x.size, sift_iterations=iterations)


def imf_diagnostics(imf_set: ImfSet) -> pd.DataFrame:
    """
    Per-component extrema and zero-crossing counts.

    Args:
        imf_set: A decomposition.

    Returns:
        DataFrame with columns component, n_extrema, n_zero_crossings,
        zero_crossing_rate, is_imf.
    """
    rows = []
    for name, component in zip(imf_set.component_names, imf_set.components()):
        maxima, minima = find_extrema(component)
        crossings = count_zero_crossings(component)
        rows.append({
            "component": name,
            "n_extrema": int(maxima.size + minima.size),
            "n_zero_crossings": crossings,
            "zero_crossing_rate": crossings / max(component.size - 1, 1),
            "is_imf": abs(maxima.size + minima.size - crossings) <= 1,
        })
    return pd.DataFrame(rows)
