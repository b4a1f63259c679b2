"""
Rolling one-step forecasting.

Walk-forward prediction over the validation region: each step predicts the
next sample from strictly earlier samples, then the true observation joins
the history. The EMD variants decompose the whole trace once, forecast
every component on its own, and add the component forecasts step by step.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from ..config import ArimaSpec, ExperimentConfig, Method, RecurrentSpec, RefitPolicy, SiftParams, TrainValSplit
from ..core.channel import InterferenceTrace
from ..core.emd import decompose
from ..core.metrics import rmse
from ..data.validators import InvalidArgumentError, validate_series
from ..utils.logging_config import log
from ..utils.rng import SeedLike, model_stream
from .arima import fit_ar, predict_one_ar
from .baselines import genie_forecast, iir_forecast
from .recurrent import TrainingDivergedError, predict_one_rnn, train_rnn, update_rnn

PredictorSpec = Union[ArimaSpec, RecurrentSpec]

# stream index of the undecomposed total; components use 1, 2, ...
DIRECT_STREAM = 0


class ForecastStepError(RuntimeError):
    """A fit or prediction failed inside the rolling loop."""

    def __init__(self, step: int, component: str, cause: Exception):
        super().__init__(f"forecast failed at step {step} for component {component!r}: {cause}")
        self.step = step
        self.component = component


@dataclass
class ForecastResult:
    """Validation-region predictions of one method."""
    method: Method
    predictions: np.ndarray
    actual: np.ndarray
    rmse: float
    per_component: Dict[str, np.ndarray] = field(default_factory=dict)
    selected: Dict[str, str] = field(default_factory=dict)
    t_offset: int = 0

    def __post_init__(self):
        if self.predictions.shape != self.actual.shape:
            raise InvalidArgumentError("predictions and actual values differ in length")


def _samples(trace) -> np.ndarray:
    if isinstance(trace, InterferenceTrace):
        return np.asarray(trace.samples, dtype=float)
    return validate_series(trace, name="trace")


def _min_train(predictor: PredictorSpec) -> int:
    if isinstance(predictor, ArimaSpec):
        return predictor.min_history
    return predictor.window + 1


def rolling_forecast(
    series,
    split: TrainValSplit,
    predictor: PredictorSpec,
    refit: RefitPolicy = RefitPolicy(),
    seed: SeedLike = 0,
    component: str = "total",
) -> np.ndarray:
    """
    Walk-forward one-step forecasts over the validation region.

    The AR model is refitted at every step on all samples before it. The
    recurrent model is trained once on the training region and then updated
    every ``refit.every`` steps according to ``refit``.

    Args:
        series: Full length-T series.
        split: Training/validation split of the series.
        predictor: ArimaSpec or RecurrentSpec.
        refit: Update policy for the recurrent model.
        seed: Stream for the recurrent model.
        component: Name attached to errors and log lines.

    Returns:
        Length-M predictions for steps P..T-1.

    Raises:
        ForecastStepError: If a fit fails; carries the step and component.
    """
    x = validate_series(series, name=component)
    split.validate_for(x.size, min_train=_min_train(predictor))
    start, end = split.train_len, split.total
    predictions = np.empty(split.val_len)

    if isinstance(predictor, ArimaSpec):
        for t in range(start, end):
            try:
                predictions[t - start] = predict_one_ar(fit_ar(x[:t], predictor))
            except (InvalidArgumentError, np.linalg.LinAlgError) as exc:
                raise ForecastStepError(t, component, exc) from exc
        return predictions

    try:
        model = train_rnn(x[:start], predictor, seed)
    except (InvalidArgumentError, TrainingDivergedError) as exc:
        raise ForecastStepError(start, component, exc) from exc

    for t in range(start, end):
        predictions[t - start] = predict_one_rnn(model, x[:t])
        if t + 1 < end and (t + 1 - start) % refit.every == 0:
            try:
                update_rnn(model, x[:t + 1], refit)
            except TrainingDivergedError as exc:
                raise ForecastStepError(t, component, exc) from exc
    return predictions


def select_predictor(
    series,
    train_len: int,
    arima: ArimaSpec,
    rnn: RecurrentSpec,
    refit: RefitPolicy,
    selection_len: int,
    seed: SeedLike = 0,
    component: str = "total",
) -> PredictorSpec:
    """
    Pick AR or the recurrent model for one component.

    Both are rolling-forecast over the last ``selection_len`` training
    samples; the one with the lower RMSE wins, AR on ties.

    Returns:
        The chosen spec.
    """
    train = validate_series(series, name=component)[:train_len]
    holdout = TrainValSplit(train_len=train.size - selection_len, val_len=selection_len)
    actual = train[holdout.train_len:]
    ar_error = rmse(rolling_forecast(train, holdout, arima, component=component), actual)
    rnn_error = rmse(rolling_forecast(train, holdout, rnn, refit, seed, component), actual)
    log.debug(f"{component}: holdout RMSE ar={ar_error:.4g} rnn={rnn_error:.4g}")
    return arima if ar_error <= rnn_error else rnn


def _component_predictor(method: Method, name: str, config: ExperimentConfig):
    if method in (Method.AR_EMD, Method.AR_DIRECT):
        return config.arima_for(name)
    if method in (Method.RNN_EMD, Method.RNN_DIRECT):
        return config.rnn_for(name)
    raise InvalidArgumentError(f"{method.value} has no single component predictor")


def emd_forecast(
    trace,
    split: TrainValSplit,
    method: Method,
    sift: Optional[SiftParams] = None,
    config: Optional[ExperimentConfig] = None,
    seed: Optional[SeedLike] = None,
) -> ForecastResult:
    """
    Decompose the full trace once and forecast each component separately.

    Component models get their own seed streams and run independently
    (``config.component_workers`` threads); results are merged in component
    order, and the final prediction at each step is the sum of the
    component predictions at that step.

    Args:
        trace: InterferenceTrace or length-T array.
        split: Training/validation split.
        method: AR_EMD, RNN_EMD or HYBRID_EMD.
        sift: Sifting parameters; defaults to ``config.sift``.
        config: Predictor settings, overrides and refit policy.
        seed: Root seed of the model streams; defaults to ``config.link.rng_seed``.

    Returns:
        ForecastResult with ``per_component`` populated.
    """
    method = Method(method)
    if not method.uses_emd:
        raise InvalidArgumentError(f"{method.value} is not an EMD method")
    config = config or ExperimentConfig()
    sift = sift or config.sift
    seed = config.link.rng_seed if seed is None else seed
    x = _samples(trace)
    split.validate_for(x.size)

    imf_set = decompose(x, sift)
    names = imf_set.component_names
    components = imf_set.components()
    log.debug(f"{method.value}: forecasting {len(names)} components")

    def run(index: int):
        name, series = names[index], components[index]
        stream = model_stream(seed, config.link.n_interferers, index + 1)
        if method is Method.HYBRID_EMD:
            predictor = select_predictor(
                series, split.train_len, config.arima_for(name), config.rnn_for(name),
                config.refit, config.selection_len, stream, name,
            )
        else:
            predictor = _component_predictor(method, name, config)
        choice = "ar" if isinstance(predictor, ArimaSpec) else "rnn"
        return rolling_forecast(series, split, predictor, config.refit, stream, name), choice

    indices = range(len(names))
    if config.component_workers > 1:
        with ThreadPoolExecutor(max_workers=config.component_workers) as pool:
            outcomes: List = list(pool.map(run, indices))
    else:
        outcomes = [run(i) for i in indices]

    per_component = {name: pred for name, (pred, _) in zip(names, outcomes)}
    predictions = np.sum(np.vstack([pred for pred, _ in outcomes]), axis=0)
    actual = x[split.train_len:].copy()
    return ForecastResult(
        method=method,
        predictions=predictions,
        actual=actual,
        rmse=rmse(predictions, actual),
        per_component=per_component,
        selected={name: choice for name, (_, choice) in zip(names, outcomes)},
        t_offset=split.train_len,
    )


def direct_forecast(
    trace,
    split: TrainValSplit,
    method: Method,
    config: Optional[ExperimentConfig] = None,
    seed: Optional[SeedLike] = None,
) -> ForecastResult:
    """Rolling forecast of the undecomposed total (AR_DIRECT or RNN_DIRECT)."""
    method = Method(method)
    if method not in (Method.AR_DIRECT, Method.RNN_DIRECT):
        raise InvalidArgumentError(f"{method.value} is not a direct method")
    config = config or ExperimentConfig()
    seed = config.link.rng_seed if seed is None else seed
    x = _samples(trace)

    predictor = config.arima if method is Method.AR_DIRECT else config.rnn
    stream = model_stream(seed, config.link.n_interferers, DIRECT_STREAM)
    predictions = rolling_forecast(x, split, predictor, config.refit, stream, "total")
    actual = x[split.train_len:].copy()
    return ForecastResult(
        method=method,
        predictions=predictions,
        actual=actual,
        rmse=rmse(predictions, actual),
        t_offset=split.train_len,
    )


def forecast_method(
    trace,
    split: TrainValSplit,
    method: Method,
    config: Optional[ExperimentConfig] = None,
    seed: Optional[SeedLike] = None,
) -> ForecastResult:
    """
    Validation-region predictions of any configured method.

    Dispatches to the EMD, direct or baseline predictor.
    """
    method = Method(method)
    config = config or ExperimentConfig()
    if method.uses_emd:
        return emd_forecast(trace, split, method, config=config, seed=seed)
    if not method.is_baseline:
        return direct_forecast(trace, split, method, config=config, seed=seed)

    x = _samples(trace)
    if method is Method.IIR:
        predictions = iir_forecast(x, split, config.iir)
    else:
        predictions = genie_forecast(x, split)
    actual = x[split.train_len:].copy()
    return ForecastResult(
        method=method,
        predictions=predictions,
        actual=actual,
        rmse=rmse(predictions, actual),
        t_offset=split.train_len,
    )
