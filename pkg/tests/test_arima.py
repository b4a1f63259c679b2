"""
Tests for the autoregressive predictor.
"""

import numpy as np
import pytest

from urllcpred.config import ArimaSpec
from urllcpred.data.validators import InvalidArgumentError
from urllcpred.forecasting.arima import fit_ar, predict_one_ar


class TestFitAr:
    """Tests for fit_ar and predict_one_ar."""

    def test_constant_series(self):
        """Differences vanish; the forecast is the last value."""
        model = fit_ar(np.full(50, 3.5), ArimaSpec(p=5, d=1))

        assert model.regularised
        assert predict_one_ar(model) == pytest.approx(3.5)

    def test_linear_ramp(self):
        """d = 1 continues a ramp exactly."""
        x = 2.0 + 0.7 * np.arange(40)
        model = fit_ar(x, ArimaSpec(p=3, d=1))
        assert predict_one_ar(model) == pytest.approx(x[-1] + 0.7, abs=1e-9)

    def test_recovers_ar1_coefficient(self):
        """A simulated AR(1) with phi = 0.8 is recovered."""
        rng = np.random.default_rng(0)
        x = np.zeros(10_000)
        for t in range(1, x.size):
            x[t] = 0.8 * x[t - 1] + rng.normal()
        model = fit_ar(x, ArimaSpec(p=1, d=0))

        assert model.coefficients[0] == pytest.approx(0.8, abs=0.05)
        assert not model.regularised

    def test_d0_mean(self):
        """d = 0 estimates the level as a mean."""
        rng = np.random.default_rng(1)
        x = 10.0 + rng.normal(size=500)
        model = fit_ar(x, ArimaSpec(p=2, d=0))

        assert model.mean == pytest.approx(10.0, abs=0.2)
        assert predict_one_ar(model) == pytest.approx(10.0, abs=1.0)

    def test_second_difference(self):
        """d = 2 continues a quadratic exactly."""
        t = np.arange(30, dtype=float)
        x = 0.5 * t ** 2 - t + 4.0
        model = fit_ar(x, ArimaSpec(p=2, d=2))
        assert predict_one_ar(model) == pytest.approx(0.5 * 30 ** 2 - 30 + 4.0, abs=1e-6)

    def test_window_limits_targets(self):
        """A window fits only the most recent samples."""
        x = np.concatenate([np.zeros(50), 1.0 + np.arange(20, dtype=float)])
        model = fit_ar(x, ArimaSpec(p=1, d=1, window=10))
        assert predict_one_ar(model) == pytest.approx(x[-1] + 1.0, abs=1e-9)

    def test_p_zero(self):
        """p = 0 with d = 1 is persistence."""
        x = np.array([1.0, 4.0, 2.0, 7.0])
        assert predict_one_ar(fit_ar(x, ArimaSpec(p=0, d=1))) == pytest.approx(7.0)

    def test_insufficient_history(self):
        """Shorter than the required history."""
        with pytest.raises(InvalidArgumentError):
            fit_ar(np.arange(5.0), ArimaSpec(p=5, d=1))

    def test_moving_average_unsupported(self):
        """q > 0 is rejected."""
        with pytest.raises(InvalidArgumentError):
            fit_ar(np.arange(50.0), ArimaSpec(p=1, d=1, q=1))
