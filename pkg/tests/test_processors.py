"""
Tests for the experiment pipeline and aggregation.
"""

import dataclasses

import numpy as np
import pandas as pd
import pytest

from urllcpred.config import ExperimentConfig, LinkConfig, Method, RecurrentSpec, RefitPolicy
from urllcpred.core import processors
from urllcpred.core.processors import ExperimentFailedError, run_experiment, run_seed


class TestRunSeed:
    """Tests for run_seed."""

    def test_rows(self, ar_only_config):
        """One row per method and target."""
        result = run_seed(ar_only_config, seed=0)
        rows = result.rows

        assert len(rows) == len(ar_only_config.methods) * len(ar_only_config.target_eps_list)
        assert set(rows["method"]) == {m.value for m in ar_only_config.methods}
        assert (rows["n_steps"] == ar_only_config.split.val_len).all()

    def test_keep_forecasts(self, ar_only_config):
        """Prediction vectors are returned on request."""
        result = run_seed(ar_only_config, seed=0, keep_forecasts=True)
        assert set(result.forecasts) == set(ar_only_config.methods)


class TestRunExperiment:
    """Tests for run_experiment."""

    def test_genie_diagonal(self):
        """Perfect prediction achieves every target within 2%."""
        config = ExperimentConfig(link=LinkConfig(n_samples=200), methods=(Method.GENIE,), n_seeds=2)
        report = run_experiment(config)
        curve = report.curve(Method.GENIE)

        for eps in config.target_eps_list:
            assert curve[eps] == pytest.approx(eps, rel=0.02)

    def test_report_shape(self, ar_only_config):
        """Every method/target pair is present."""
        report = run_experiment(ar_only_config)
        n_targets = len(ar_only_config.target_eps_list)

        assert len(report.outage_curve) == len(ar_only_config.methods) * n_targets
        assert len(report.resource_curve) == len(ar_only_config.methods) * n_targets
        assert report.methods == [m.value for m in ar_only_config.methods]
        assert report.metadata["seeds"] == [0, 1]
        assert report.metadata["complete"]

    def test_resources_non_increasing(self, ar_only_config):
        """Looser targets never need more channel uses."""
        report = run_experiment(ar_only_config)
        for method in ar_only_config.methods:
            uses = report.curve(method, "mean_channel_uses").to_numpy()
            assert np.all(np.diff(uses) <= 1e-9)

    def test_aggregation_linearity(self, ar_only_config):
        """Report means equal the mean of per-seed means."""
        report = run_experiment(ar_only_config)
        per_seed = report.per_seed
        rows = per_seed[(per_seed["method"] == "iir") & (per_seed["target_eps"] == 1e-3)]

        assert report.curve(Method.IIR)[1e-3] == pytest.approx(rows["mean_achieved_eps"].mean())

    def test_deterministic(self, ar_only_config):
        """Two runs give identical tables."""
        a = run_experiment(ar_only_config)
        b = run_experiment(ar_only_config)
        pd.testing.assert_frame_equal(a.per_seed, b.per_seed)
        assert a.metadata["config_sha256"] == b.metadata["config_sha256"]

    def test_worker_processes(self, ar_only_config):
        """Seed-level parallelism does not change the report."""
        serial = run_experiment(ar_only_config)
        parallel = run_experiment(dataclasses.replace(ar_only_config, n_workers=2))
        pd.testing.assert_frame_equal(serial.outage_curve, parallel.outage_curve)

    def test_failed_seed_recorded(self, ar_only_config, monkeypatch):
        """One failed seed in five is tolerated and noted."""
        config = dataclasses.replace(ar_only_config, n_seeds=5)
        original = processors.run_seed

        def flaky(cfg, seed, keep_forecasts=False):
            if seed == 2:
                raise RuntimeError("synthetic failure")
            return original(cfg, seed, keep_forecasts)

        monkeypatch.setattr(processors, "run_seed", flaky)
        report = run_experiment(config)

        assert report.metadata["seeds"] == [0, 1, 3, 4]
        assert "2" in report.metadata["failed_seeds"]
        assert not report.metadata["complete"]

    def test_too_many_failures(self, ar_only_config, monkeypatch):
        """More than 20% failed seeds abort the experiment."""
        config = dataclasses.replace(ar_only_config, n_seeds=5)
        original = processors.run_seed

        def flaky(cfg, seed, keep_forecasts=False):
            if seed in (1, 3):
                raise RuntimeError("synthetic failure")
            return original(cfg, seed, keep_forecasts)

        monkeypatch.setattr(processors, "run_seed", flaky)
        with pytest.raises(ExperimentFailedError):
            run_experiment(config)

    @pytest.mark.slow
    def test_all_methods_smoke(self, smoke_config):
        """Every default method runs end to end with small models."""
        report = run_experiment(smoke_config)
        assert set(report.rmse_table["method"]) == {m.value for m in smoke_config.methods}
        assert (report.rmse_table["rmse_mean"] >= 0).all()


def mean_rmse(report, method):
    table = report.rmse_table.set_index("method")
    return table.loc[method.value, "rmse_mean"]


@pytest.mark.slow
class TestDefaultRegime:
    """Outage and RMSE relations on the default link, 20 seeds."""

    @pytest.fixture(scope="class")
    def report(self):
        config = ExperimentConfig(methods=(Method.AR_EMD, Method.AR_DIRECT, Method.IIR, Method.GENIE))
        return run_experiment(config)

    def test_iir_misses_strict_targets(self, report):
        """The smoothed estimate stays above 1e-2 when 1e-5 is asked for."""
        assert report.curve(Method.IIR)[1e-5] > 1e-2

    def test_ar_emd_far_below_iir(self, report):
        """AR on the decomposition is at least ten times more reliable than IIR at 1e-5."""
        assert report.curve(Method.AR_EMD)[1e-5] <= report.curve(Method.IIR)[1e-5] / 10

    @pytest.mark.parametrize("eps", [1e-4, 1e-3])
    def test_curve_ordering(self, report, eps):
        """Genie <= AR_EMD <= AR_DIRECT <= IIR in achieved outage."""
        genie = report.curve(Method.GENIE)[eps]
        ar_emd = report.curve(Method.AR_EMD)[eps]
        ar_direct = report.curve(Method.AR_DIRECT)[eps]
        iir = report.curve(Method.IIR)[eps]
        assert genie <= ar_emd <= ar_direct <= iir

    def test_emd_lowers_ar_rmse(self, report):
        """Decomposition cuts the AR prediction error by at least 10%."""
        assert mean_rmse(report, Method.AR_EMD) <= 0.9 * mean_rmse(report, Method.AR_DIRECT)


@pytest.mark.slow
class TestRecurrentRegime:
    """RMSE and outage relations for the recurrent predictors on the default link."""

    @pytest.fixture(scope="class")
    def report(self):
        config = ExperimentConfig(
            rnn=RecurrentSpec(hidden_units=(16, 16), epochs=20, window=30, batch_size=64),
            refit=RefitPolicy(epochs=1, recent_pairs=32, every=10),
            methods=(Method.RNN_EMD, Method.RNN_DIRECT, Method.GENIE),
            n_seeds=2,
        )
        return run_experiment(config)

    def test_emd_lowers_rnn_rmse(self, report):
        """Decomposition cuts the recurrent prediction error by at least 10%."""
        assert mean_rmse(report, Method.RNN_EMD) <= 0.9 * mean_rmse(report, Method.RNN_DIRECT)

    @pytest.mark.parametrize("eps", [1e-4, 1e-3])
    def test_curve_ordering(self, report, eps):
        """Genie <= RNN_EMD <= RNN_DIRECT in achieved outage."""
        genie = report.curve(Method.GENIE)[eps]
        rnn_emd = report.curve(Method.RNN_EMD)[eps]
        rnn_direct = report.curve(Method.RNN_DIRECT)[eps]
        assert genie <= rnn_emd <= rnn_direct
