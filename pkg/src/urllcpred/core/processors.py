"""
Main processor module.

Orchestrates the Monte-Carlo experiment: per seed, simulate the traces,
predict the validation region with every configured method, allocate
channel uses at every target error rate, and aggregate across seeds.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd

from ..analysis.statistics import ExperimentReport, build_report, seed_rows
from ..config import ExperimentConfig, Method
from ..forecasting.rolling import ForecastResult, forecast_method
from ..utils.decorators import timer
from ..utils.logging_config import log
from .channel import gen_desired_trace, gen_interference_trace
from .fbl import allocate_series
from .metrics import summarise_allocation

MAX_FAILED_FRACTION = 0.2


class ExperimentFailedError(RuntimeError):
    """More than the tolerated share of seeds failed."""

    def __init__(self, failed: Dict[int, str], n_seeds: int):
        super().__init__(f"{len(failed)} of {n_seeds} seeds failed: {failed}")
        self.failed = failed


@dataclass
class SeedResult:
    """Everything one seed contributes to the report."""
    seed: int
    rows: pd.DataFrame
    forecasts: Dict[Method, ForecastResult] = field(default_factory=dict)


def allocate_forecast(
    forecast: ForecastResult,
    signal_power,
    config: ExperimentConfig,
) -> List[dict]:
    """
    Allocation summaries of one forecast at every configured target.

    Args:
        forecast: Validation-region predictions.
        signal_power: Scalar S or the desired trace's validation samples.
        config: Supplies D, the targets, N0 and the rounding mode.

    Returns:
        One dict per target with method, target_eps and the
        ``summarise_allocation`` fields.
    """
    summaries = []
    for eps in config.target_eps_list:
        records = allocate_series(
            forecast.predictions,
            forecast.actual,
            signal_power,
            config.link.noise_power,
            config.payload_bits,
            eps,
            integer_R=config.integer_R,
            t_offset=forecast.t_offset,
        )
        summaries.append({"method": forecast.method.value, "target_eps": eps, **summarise_allocation(records)})
    return summaries


def run_seed(config: ExperimentConfig, seed: int, keep_forecasts: bool = False) -> SeedResult:
    """
    Run the full pipeline for one Monte-Carlo seed.

    Args:
        config: Experiment configuration.
        seed: Root seed of this realisation.
        keep_forecasts: Whether to return the prediction vectors too.

    Returns:
        SeedResult.
    """
    link = config.link.with_seed(seed)
    trace = gen_interference_trace(link)
    desired = gen_desired_trace(link)
    split = config.split
    signal = desired.samples[split.train_len:]

    rmse_by_method = {}
    allocation = []
    forecasts = {}
    for method in config.methods:
        forecast = forecast_method(trace, split, method, config=config, seed=seed)
        log.debug(f"seed {seed} {method.value}: RMSE {forecast.rmse:.4g}")
        rmse_by_method[method] = forecast.rmse
        allocation.extend(allocate_forecast(forecast, signal, config))
        if keep_forecasts:
            forecasts[method] = forecast

    return SeedResult(seed=seed, rows=seed_rows(seed, rmse_by_method, allocation), forecasts=forecasts)


def _run_seed_safe(args: Tuple[ExperimentConfig, int]) -> Tuple[int, Optional[SeedResult], Optional[str]]:
    config, seed = args
    try:
        return seed, run_seed(config, seed), None
    except Exception as e:
        log.error(f"seed {seed} failed: {e}")
        return seed, None, f"{type(e).__name__}: {e}"


@timer
def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """
    Run every seed and aggregate the results.

    Seeds are independent and run in ``config.n_workers`` processes; the
    merge is keyed by seed, so the report does not depend on scheduling.

    Args:
        config: Experiment configuration.

    Returns:
        ExperimentReport.

    Raises:
        ExperimentFailedError: If more than 20% of the seeds fail.
    """
    seeds = config.seeds
    log.info(f"Running {len(seeds)} seeds with methods {[m.value for m in config.methods]}")

    jobs = [(config, seed) for seed in seeds]
    if config.n_workers > 1:
        with ProcessPoolExecutor(max_workers=min(config.n_workers, len(jobs))) as pool:
            outcomes = list(pool.map(_run_seed_safe, jobs))
    else:
        outcomes = [_run_seed_safe(job) for job in jobs]

    results = {seed: result for seed, result, _ in outcomes if result is not None}
    failed = {seed: message for seed, _, message in outcomes if message is not None}
    if len(failed) > MAX_FAILED_FRACTION * len(seeds):
        raise ExperimentFailedError(failed, len(seeds))
    if failed:
        log.warning(f"report is incomplete: {len(failed)} seeds failed")

    per_seed = pd.concat([results[s].rows for s in sorted(results)], ignore_index=True)
    report = build_report(config, per_seed, failed)
    log.info(f"Aggregated {len(results)} seeds")
    return report
