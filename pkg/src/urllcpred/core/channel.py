"""
Link-level channel simulation.

Desired and interfering received powers under Rayleigh block fading. Only
powers are modelled: the squared magnitude of a unit Rayleigh coefficient is
exponential, so a faded power with mean ``m`` is an Exp(m) variate held
constant over each coherence block. Block gains may be correlated in time.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy.signal import lfilter

from ..config import LinkConfig
from ..data.validators import InvalidArgumentError, check_count, check_non_negative, check_positive
from ..utils.rng import SeedLike, desired_stream, interferer_stream, inr_stream, make_generator


@dataclass(frozen=True)
class InterferenceTrace:
    """Aggregate interference power seen by the UE, optionally per interferer."""
    samples: np.ndarray
    per_interferer: Optional[np.ndarray] = None

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if np.any(samples < 0):
            raise InvalidArgumentError("interference powers must be >= 0")
        if self.per_interferer is not None:
            matrix = np.atleast_2d(np.array(self.per_interferer, dtype=float))
            matrix.setflags(write=False)
            object.__setattr__(self, "per_interferer", matrix)
            if matrix.shape[1] != samples.size:
                raise InvalidArgumentError(
                    f"per_interferer has {matrix.shape[1]} columns, expected {samples.size}"
                )

    def __len__(self) -> int:
        return self.samples.size

    @property
    def n_interferers(self) -> Optional[int]:
        return None if self.per_interferer is None else self.per_interferer.shape[0]


@dataclass(frozen=True)
class DesiredTrace:
    """Desired received power S per sample."""
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if np.any(samples < 0):
            raise InvalidArgumentError("desired powers must be >= 0")

    def __len__(self) -> int:
        return self.samples.size


def db_to_linear(value_db):
    """Convert dB to a linear power ratio."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def gen_block_rayleigh_powers(
    mean_power: float,
    n: int,
    block_len: int,
    seed: SeedLike,
    correlation: float = 0.0,
) -> np.ndarray:
    """
    Received powers under Rayleigh block fading.

    With ``correlation`` = 0 the block values are independent exponential
    variates. Otherwise the unit complex gain evolves across blocks as a
    first-order Gauss-Markov process, h[k] = rho h[k-1] + sqrt(1 - rho^2) w[k],
    and the power is ``mean_power * |h[k]|^2``; the marginal stays Exp(mean)
    and consecutive block powers have correlation rho^2.

    Args:
        mean_power: Mean linear power.
        n: Number of samples.
        block_len: Samples per coherence block.
        seed: Integer seed or SeedSequence stream.
        correlation: Gain correlation rho in [0, 1) between consecutive blocks.

    Returns:
        Length-n array, constant within each block.
    """
    check_positive("mean_power", mean_power)
    check_count("n", n)
    check_count("block_len", block_len)
    check_non_negative("correlation", correlation)
    if not correlation < 1:
        raise InvalidArgumentError(f"correlation must be < 1, got {correlation!r}")

    rng = make_generator(seed)
    n_blocks = -(-n // block_len)
    if correlation == 0:
        blocks = rng.exponential(scale=mean_power, size=n_blocks)
    else:
        # real and imaginary parts, each N(0, 1/2)
        w = rng.standard_normal(size=(2, n_blocks)) * np.sqrt(0.5)
        w[:, 1:] *= np.sqrt(1.0 - correlation ** 2)
        gains = lfilter([1.0], [1.0, -correlation], w, axis=-1)
        blocks = mean_power * np.sum(gains ** 2, axis=0)
    return np.repeat(blocks, block_len)[:n]


def resolve_inr_db(config: LinkConfig) -> np.ndarray:
    """
    Mean INR of each interferer in dB.

    Uses the configured list, or a uniform draw from ``inr_range_db`` on the
    config seed's INR stream.
    """
    if config.inr_range_db is None:
        return np.asarray(config.interferer_mean_inr_db, dtype=float)
    low, high = config.inr_range_db
    rng = make_generator(inr_stream(config.rng_seed, config.n_interferers))
    return rng.uniform(low, high, size=config.n_interferers)


def gen_interference_trace(config: LinkConfig) -> InterferenceTrace:
    """
    Aggregate interference power from N independently faded interferers.

    Interferer i draws from stream i of the config seed, so adding an
    interferer never changes the others' realisations.
    """
    means = config.noise_power * db_to_linear(resolve_inr_db(config))
    per_interferer = np.vstack([
        gen_block_rayleigh_powers(
            mean_power=float(mean),
            n=config.n_samples,
            block_len=config.coherence_block_len,
            correlation=config.fading_correlation,
            seed=interferer_stream(config.rng_seed, i),
        )
        for i, mean in enumerate(means)
    ])
    total = per_interferer.sum(axis=0)
    return InterferenceTrace(
        samples=total,
        per_interferer=per_interferer if config.keep_per_interferer else None,
    )


def gen_desired_trace(config: LinkConfig) -> DesiredTrace:
    """
    Desired received power S.

    Constant at N0 * 10^(SNR/10) by default (fading absorbed into the known
    CSI); block-Rayleigh faded around that mean when ``faded_desired`` is set.
    """
    mean = config.desired_power
    if not config.faded_desired:
        return DesiredTrace(samples=np.full(config.n_samples, mean))
    return DesiredTrace(
        samples=gen_block_rayleigh_powers(
            mean_power=mean,
            n=config.n_samples,
            block_len=config.coherence_block_len,
            correlation=config.fading_correlation,
            seed=desired_stream(config.rng_seed, config.n_interferers),
        )
    )


def summarise_trace(trace: InterferenceTrace) -> pd.DataFrame:
    """
    Mean, std, min and max of the aggregate and of each interferer.

    Args:
        trace: Interference trace.

    Returns:
        DataFrame with one row per series (``total``, ``i1`` ...).
    """
    series = {"total": trace.samples}
    if trace.per_interferer is not None:
        for i, row in enumerate(trace.per_interferer, start=1):
            series[f"i{i}"] = row

    rows = []
    for name, values in series.items():
        rows.append({
            "series": name,
            "mean": float(np.mean(values)),
            "std": float(np.std(values)),
            "min": float(np.min(values)),
            "max": float(np.max(values)),
        })
    return pd.DataFrame(rows)
