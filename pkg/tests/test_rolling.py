"""
Tests for rolling, EMD and direct forecasting.
"""

import numpy as np
import pytest

from urllcpred.config import (
    ArimaSpec,
    ExperimentConfig,
    LinkConfig,
    Method,
    RefitPolicy,
    TrainValSplit,
)
from urllcpred.core.channel import gen_interference_trace
from urllcpred.core.metrics import rmse
from urllcpred.data.validators import InvalidArgumentError
from urllcpred.forecasting import rolling
from urllcpred.forecasting.arima import fit_ar, predict_one_ar
from urllcpred.forecasting.rolling import (
    ForecastStepError,
    direct_forecast,
    emd_forecast,
    forecast_method,
    rolling_forecast,
)


class TestRollingForecast:
    """Tests for rolling_forecast."""

    def test_single_step(self):
        """M = 1 is one fit and one prediction."""
        rng = np.random.default_rng(0)
        x = rng.normal(size=60).cumsum()
        spec = ArimaSpec(p=3, d=1)
        predictions = rolling_forecast(x, TrainValSplit(train_len=59, val_len=1), spec)

        assert predictions.shape == (1,)
        assert predictions[0] == predict_one_ar(fit_ar(x[:59], spec))

    def test_random_walk_against_persistence(self):
        """AR with d = 1 is no worse than 1.5x the last-value predictor."""
        rng = np.random.default_rng(1)
        x = rng.normal(size=600).cumsum()
        split = TrainValSplit(train_len=500, val_len=100)
        predictions = rolling_forecast(x, split, ArimaSpec(p=10, d=1))

        naive = rmse(x[499:-1], x[500:])
        assert rmse(predictions, x[500:]) <= 1.5 * naive

    def test_affine_series_exact(self):
        """d = 1 predicts an affine series without error."""
        x = 1.5 + 0.25 * np.arange(80)
        predictions = rolling_forecast(x, TrainValSplit(train_len=60, val_len=20), ArimaSpec(p=2, d=1))
        np.testing.assert_allclose(predictions, x[60:], atol=1e-8)

    def test_ar_truncation_equivalence(self):
        """Prediction t only uses samples before t."""
        rng = np.random.default_rng(2)
        x = rng.exponential(size=120)
        spec = ArimaSpec(p=4, d=1)
        full = rolling_forecast(x, TrainValSplit(train_len=100, val_len=20), spec)
        cut = rolling_forecast(x[:111], TrainValSplit(train_len=100, val_len=11), spec)
        np.testing.assert_array_equal(full[:11], cut)

    def test_rnn_truncation_equivalence(self, tiny_rnn):
        """The recurrent loop is causal and replayable."""
        x = np.sin(np.arange(70) / 3.0) + 2.0
        refit = RefitPolicy(epochs=1, recent_pairs=8, every=1)
        full = rolling_forecast(x, TrainValSplit(train_len=60, val_len=10), tiny_rnn, refit, seed=3)
        cut = rolling_forecast(x[:65], TrainValSplit(train_len=60, val_len=5), tiny_rnn, refit, seed=3)
        np.testing.assert_array_equal(full[:5], cut)

    def test_deterministic_replay(self, tiny_rnn):
        """Same inputs and seed, same predictions."""
        x = np.cos(np.arange(60) / 5.0)
        split = TrainValSplit(train_len=50, val_len=10)
        a = rolling_forecast(x, split, tiny_rnn, seed=7)
        b = rolling_forecast(x, split, tiny_rnn, seed=7)
        np.testing.assert_array_equal(a, b)

    def test_refit_cadence(self, tiny_rnn, monkeypatch):
        """The recurrent model is updated once per ``every`` steps."""
        calls = []
        original = rolling.update_rnn

        def counting(model, history, policy):
            calls.append(len(history))
            return original(model, history, policy)

        monkeypatch.setattr(rolling, "update_rnn", counting)
        x = np.sin(np.arange(72) / 3.0) + 2.0
        refit = RefitPolicy(epochs=1, recent_pairs=16, every=5)
        rolling_forecast(x, TrainValSplit(train_len=60, val_len=12), tiny_rnn, refit, seed=3)

        assert calls == [65, 70]

    def test_step_error(self, monkeypatch):
        """Fit failures carry the step index and component."""
        x = np.random.default_rng(3).normal(size=40)
        original = rolling.fit_ar

        def failing(series, spec):
            if len(series) == 35:
                raise InvalidArgumentError("boom")
            return original(series, spec)

        monkeypatch.setattr(rolling, "fit_ar", failing)
        with pytest.raises(ForecastStepError) as info:
            rolling_forecast(x, TrainValSplit(train_len=30, val_len=10), ArimaSpec(p=2), component="imf2")
        assert info.value.step == 35
        assert info.value.component == "imf2"

    def test_history_too_short(self):
        """The training region must hold the model's history."""
        with pytest.raises(InvalidArgumentError):
            rolling_forecast(np.arange(20.0), TrainValSplit(train_len=10, val_len=10), ArimaSpec(p=30))


class TestEmdForecast:
    """Tests for emd_forecast and direct_forecast."""

    def test_component_sum(self, ar_only_config):
        """The prediction is the per-step sum of component predictions."""
        trace = gen_interference_trace(ar_only_config.link)
        result = emd_forecast(trace, ar_only_config.split, Method.AR_EMD, config=ar_only_config)

        stacked = np.sum(np.vstack(list(result.per_component.values())), axis=0)
        np.testing.assert_allclose(result.predictions, stacked, rtol=1e-12)
        assert result.predictions.shape == (ar_only_config.split.val_len,)
        assert list(result.per_component)[-1] == "residual"
        assert set(result.selected.values()) == {"ar"}

    def test_monotone_trace_matches_direct(self):
        """Without IMFs the EMD forecast is the direct forecast of the residual."""
        x = np.linspace(1.0, 3.0, 100) ** 2
        config = ExperimentConfig(arima=ArimaSpec(p=3), methods=(Method.AR_EMD,))
        split = TrainValSplit(train_len=80, val_len=20)

        emd = emd_forecast(x, split, Method.AR_EMD, config=config)
        direct = direct_forecast(x, split, Method.AR_DIRECT, config=config)

        assert list(emd.per_component) == ["residual"]
        np.testing.assert_array_equal(emd.predictions, direct.predictions)

    def test_component_overrides(self, ar_only_config):
        """A residual override changes only that component's model."""
        trace = gen_interference_trace(ar_only_config.link)
        plain = emd_forecast(trace, ar_only_config.split, Method.AR_EMD, config=ar_only_config)
        tuned = emd_forecast(
            trace,
            ar_only_config.split,
            Method.AR_EMD,
            config=ExperimentConfig(
                link=ar_only_config.link,
                arima=ar_only_config.arima,
                arima_overrides={"residual": ArimaSpec(p=1)},
                methods=ar_only_config.methods,
            ),
        )
        np.testing.assert_array_equal(plain.per_component["imf1"], tuned.per_component["imf1"])
        assert not np.array_equal(plain.per_component["residual"], tuned.per_component["residual"])

    def test_parallel_components(self, ar_only_config):
        """Threaded component forecasts merge in component order."""
        trace = gen_interference_trace(ar_only_config.link)
        serial = emd_forecast(trace, ar_only_config.split, Method.AR_EMD, config=ar_only_config)
        threaded_config = ExperimentConfig(
            link=ar_only_config.link,
            arima=ar_only_config.arima,
            methods=ar_only_config.methods,
            component_workers=3,
        )
        threaded = emd_forecast(trace, ar_only_config.split, Method.AR_EMD, config=threaded_config)
        np.testing.assert_array_equal(serial.predictions, threaded.predictions)

    def test_rejects_direct_method(self, ar_only_config):
        """Only EMD methods decompose."""
        trace = gen_interference_trace(ar_only_config.link)
        with pytest.raises(InvalidArgumentError):
            emd_forecast(trace, ar_only_config.split, Method.AR_DIRECT, config=ar_only_config)

    @pytest.mark.slow
    def test_emd_improves_ar(self):
        """Decomposition lowers the AR prediction error on simulated traces."""
        config = ExperimentConfig(methods=(Method.AR_EMD, Method.AR_DIRECT))
        emd_errors, direct_errors = [], []
        for seed in (0, 1):
            trace = gen_interference_trace(LinkConfig(rng_seed=seed))
            emd_errors.append(emd_forecast(trace, config.split, Method.AR_EMD, config=config, seed=seed).rmse)
            direct_errors.append(direct_forecast(trace, config.split, Method.AR_DIRECT, config=config, seed=seed).rmse)
        assert np.mean(emd_errors) < np.mean(direct_errors)

    @pytest.mark.slow
    def test_hybrid_selection(self, smoke_config):
        """Each component is assigned AR or the recurrent model."""
        config = ExperimentConfig(
            link=smoke_config.link,
            arima=smoke_config.arima,
            rnn=smoke_config.rnn,
            refit=smoke_config.refit,
            methods=(Method.HYBRID_EMD,),
            selection_len=10,
        )
        trace = gen_interference_trace(config.link)
        result = emd_forecast(trace, config.split, Method.HYBRID_EMD, config=config)

        assert set(result.selected) == set(result.per_component)
        assert set(result.selected.values()) <= {"ar", "rnn"}
        stacked = np.sum(np.vstack(list(result.per_component.values())), axis=0)
        np.testing.assert_allclose(result.predictions, stacked, rtol=1e-12)


class TestForecastMethod:
    """Tests for forecast_method dispatch."""

    def test_baselines(self, ar_only_config):
        """Genie has zero error; IIR has the validation length."""
        trace = gen_interference_trace(ar_only_config.link)
        split = ar_only_config.split
        genie = forecast_method(trace, split, Method.GENIE, config=ar_only_config)
        iir = forecast_method(trace, split, Method.IIR, config=ar_only_config)

        assert genie.rmse == 0.0
        assert iir.predictions.shape == (split.val_len,)
        assert iir.t_offset == split.train_len

    def test_direct(self, ar_only_config):
        """Direct AR has no components."""
        trace = gen_interference_trace(ar_only_config.link)
        result = forecast_method(trace, ar_only_config.split, Method.AR_DIRECT, config=ar_only_config)
        assert result.per_component == {}
        assert result.rmse > 0
