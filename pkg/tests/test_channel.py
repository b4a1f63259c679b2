"""
Tests for the channel simulation module.
"""

import numpy as np
import pytest

from urllcpred.config import LinkConfig
from urllcpred.core.channel import (
    InterferenceTrace,
    db_to_linear,
    gen_block_rayleigh_powers,
    gen_desired_trace,
    gen_interference_trace,
    resolve_inr_db,
    summarise_trace,
)
from urllcpred.data.validators import InvalidArgumentError


class TestBlockRayleighPowers:
    """Tests for gen_block_rayleigh_powers."""

    def test_constant_within_blocks(self):
        """Values repeat over each coherence block."""
        powers = gen_block_rayleigh_powers(1.0, n=10, block_len=4, seed=1)

        assert powers.shape == (10,)
        assert np.all(powers[:4] == powers[0])
        assert np.all(powers[4:8] == powers[4])
        assert np.all(powers[8:] == powers[8])

    def test_exponential_mean(self):
        """Sample mean converges to the configured mean power."""
        powers = gen_block_rayleigh_powers(3.0, n=200_000, block_len=1, seed=2)
        assert powers.mean() == pytest.approx(3.0, rel=0.02)
        # exponential: std equals mean
        assert powers.std() == pytest.approx(3.0, rel=0.03)

    def test_reproducible(self):
        """Same seed, same draw."""
        a = gen_block_rayleigh_powers(1.0, n=50, block_len=1, seed=5)
        b = gen_block_rayleigh_powers(1.0, n=50, block_len=1, seed=5)
        np.testing.assert_array_equal(a, b)

    def test_correlated_marginal(self):
        """Correlated gains keep the exponential marginal."""
        powers = gen_block_rayleigh_powers(3.0, n=400_000, block_len=1, seed=2, correlation=0.9)
        assert powers.mean() == pytest.approx(3.0, rel=0.03)
        assert powers.std() == pytest.approx(3.0, rel=0.05)

    def test_power_autocorrelation(self):
        """Consecutive block powers correlate as rho squared."""
        powers = gen_block_rayleigh_powers(1.0, n=200_000, block_len=1, seed=4, correlation=0.9)
        lag1 = np.corrcoef(powers[:-1], powers[1:])[0, 1]
        assert lag1 == pytest.approx(0.81, abs=0.02)

    def test_correlated_blocks_constant(self):
        """Correlation acts between blocks, not within them."""
        powers = gen_block_rayleigh_powers(1.0, n=12, block_len=3, seed=1, correlation=0.5)
        blocks = powers.reshape(4, 3)
        assert np.all(blocks == blocks[:, :1])

    def test_correlation_range(self):
        """rho must lie in [0, 1)."""
        with pytest.raises(InvalidArgumentError):
            gen_block_rayleigh_powers(1.0, n=5, block_len=1, seed=0, correlation=1.0)
        with pytest.raises(InvalidArgumentError):
            gen_block_rayleigh_powers(1.0, n=5, block_len=1, seed=0, correlation=-0.1)

    def test_invalid_mean(self):
        """Mean power must be positive."""
        with pytest.raises(InvalidArgumentError):
            gen_block_rayleigh_powers(0.0, n=5, block_len=1, seed=0)


class TestInterferenceTrace:
    """Tests for gen_interference_trace and the trace type."""

    def test_total_is_sum_of_interferers(self, link_config):
        """Aggregate equals the per-interferer sum."""
        trace = gen_interference_trace(link_config)

        assert len(trace) == link_config.n_samples
        assert trace.n_interferers == 5
        np.testing.assert_allclose(trace.samples, trace.per_interferer.sum(axis=0))

    def test_mean_inr(self):
        """Each interferer's mean power follows its INR."""
        link = LinkConfig(n_samples=400_000)
        trace = gen_interference_trace(link)
        expected = db_to_linear(link.interferer_mean_inr_db)

        np.testing.assert_allclose(trace.per_interferer.mean(axis=1), expected, rtol=0.03)

    def test_streams_independent_of_interferer_count(self):
        """Adding an interferer leaves the others' realisations unchanged."""
        two = LinkConfig(n_interferers=2, interferer_mean_inr_db=(5.0, 3.0), n_samples=100)
        three = LinkConfig(n_interferers=3, interferer_mean_inr_db=(5.0, 3.0, 0.0), n_samples=100)

        a = gen_interference_trace(two).per_interferer
        b = gen_interference_trace(three).per_interferer
        np.testing.assert_array_equal(a, b[:2])

    def test_different_seeds_differ(self, link_config):
        """Seeds give distinct realisations."""
        a = gen_interference_trace(link_config)
        b = gen_interference_trace(link_config.with_seed(1))
        assert not np.array_equal(a.samples, b.samples)

    def test_per_interferer_optional(self):
        """keep_per_interferer=False drops the matrix."""
        trace = gen_interference_trace(LinkConfig(n_samples=50, keep_per_interferer=False))
        assert trace.per_interferer is None
        assert trace.n_interferers is None

    def test_read_only_copy(self):
        """The trace copies and freezes its input."""
        source = np.ones(4)
        trace = InterferenceTrace(samples=source)
        source[0] = 5.0

        assert trace.samples[0] == 1.0
        with pytest.raises(ValueError):
            trace.samples[0] = 2.0

    def test_negative_power_rejected(self):
        """Powers are non-negative."""
        with pytest.raises(InvalidArgumentError):
            InterferenceTrace(samples=np.array([1.0, -0.1]))


class TestInrRange:
    """Tests for uniformly drawn INRs."""

    def test_draw_within_range(self):
        """Drawn INRs lie in the configured range and are reproducible."""
        link = LinkConfig(n_interferers=8, inr_range_db=(-5.0, 5.0), rng_seed=3)
        inr = resolve_inr_db(link)

        assert inr.shape == (8,)
        assert np.all((inr >= -5.0) & (inr <= 5.0))
        np.testing.assert_array_equal(inr, resolve_inr_db(link))

    def test_list_used_without_range(self, link_config):
        """Without a range the configured list is returned."""
        np.testing.assert_array_equal(resolve_inr_db(link_config), [5.0, 3.0, 0.0, -2.0, -5.0])


class TestDesiredTrace:
    """Tests for gen_desired_trace."""

    def test_constant_by_default(self, link_config):
        """S = N0 * 10^(SNR/10) at every sample."""
        desired = gen_desired_trace(link_config)
        np.testing.assert_allclose(desired.samples, 100.0)

    def test_faded(self):
        """Faded desired power varies around its mean."""
        desired = gen_desired_trace(LinkConfig(n_samples=400_000, faded_desired=True))
        assert desired.samples.std() > 0
        assert desired.samples.mean() == pytest.approx(100.0, rel=0.03)


class TestSummariseTrace:
    """Tests for summarise_trace."""

    def test_rows_and_columns(self, link_config):
        """One row for the total and one per interferer."""
        summary = summarise_trace(gen_interference_trace(link_config))

        assert list(summary["series"]) == ["total", "i1", "i2", "i3", "i4", "i5"]
        assert list(summary.columns) == ["series", "mean", "std", "min", "max"]
        assert (summary["min"] >= 0).all()
