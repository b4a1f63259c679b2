"""
Named, splittable random streams.

Every random quantity in a simulation is drawn from a child of one root
``numpy.random.SeedSequence``. The child layout for a root seed with N
interferers is fixed:

    0 .. N-1   per-interferer fading
    N          desired-link fading
    N + 1      uniform INR draw
    N + 2      forecasting models (further spawned per component)

Spawned children depend only on (root seed, child index), so streams are
stable across runs, platforms and worker processes.
"""

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence]

INTERFERER_BASE = 0


def as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    """Wrap an integer seed; pass SeedSequences through unchanged."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def child_stream(seed: SeedLike, index: int) -> np.random.SeedSequence:
    """The ``index``-th child of ``seed``, independent of how many siblings exist."""
    parent = as_seed_sequence(seed)
    return np.random.SeedSequence(
        entropy=parent.entropy,
        spawn_key=tuple(parent.spawn_key) + (int(index),),
    )


def interferer_stream(seed: SeedLike, i: int) -> np.random.SeedSequence:
    return child_stream(seed, INTERFERER_BASE + i)


def desired_stream(seed: SeedLike, n_interferers: int) -> np.random.SeedSequence:
    return child_stream(seed, n_interferers)


def inr_stream(seed: SeedLike, n_interferers: int) -> np.random.SeedSequence:
    return child_stream(seed, n_interferers + 1)


def model_stream(seed: SeedLike, n_interferers: int, component: int) -> np.random.SeedSequence:
    """Stream for the forecasting model of one component (0 = undecomposed total)."""
    return child_stream(child_stream(seed, n_interferers + 2), component)


def make_generator(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator for a seed or stream."""
    return np.random.Generator(np.random.PCG64(as_seed_sequence(seed)))
