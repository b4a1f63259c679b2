"""
Pytest configuration and fixtures.

Common test fixtures for the test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from urllcpred.config import (
    ArimaSpec,
    ExperimentConfig,
    LinkConfig,
    Method,
    RecurrentSpec,
    RefitPolicy,
)


@pytest.fixture
def link_config():
    """Five interferers at the default INRs, T = 1000."""
    return LinkConfig()


@pytest.fixture
def short_link():
    """A 200-sample link for pipeline tests."""
    return LinkConfig(n_samples=200, rng_seed=11)


@pytest.fixture
def tiny_rnn():
    """Small recurrent spec that trains in well under a second."""
    return RecurrentSpec(hidden_units=(6,), epochs=3, window=8, batch_size=16)


@pytest.fixture
def ar_only_config():
    """Experiment with only AR and baseline methods (fast, deterministic)."""
    return ExperimentConfig(
        link=LinkConfig(n_samples=200),
        arima=ArimaSpec(p=5),
        methods=(Method.AR_EMD, Method.AR_DIRECT, Method.IIR, Method.GENIE),
        n_seeds=2,
        n_workers=1,
    )


@pytest.fixture
def smoke_config(tiny_rnn):
    """Every default method with tiny models."""
    return ExperimentConfig(
        link=LinkConfig(n_samples=150),
        arima=ArimaSpec(p=4),
        rnn=tiny_rnn,
        refit=RefitPolicy(epochs=1, recent_pairs=16),
        n_seeds=2,
        n_workers=1,
    )


@pytest.fixture
def sine_series():
    """Four periods per 100 samples of a unit sine."""
    t = np.arange(500)
    return np.sin(2 * np.pi * t / 25)
