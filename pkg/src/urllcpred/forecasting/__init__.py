"""Interference predictors and the rolling forecast loop."""

from .arima import ArimaModel, fit_ar, predict_one_ar
from .baselines import genie_forecast, iir_filter, iir_forecast
from .recurrent import (
    LstmRegressor,
    MinMaxScaler,
    RnnModel,
    TrainingDivergedError,
    predict_one_rnn,
    train_rnn,
    update_rnn,
)
from .rolling import (
    ForecastResult,
    ForecastStepError,
    direct_forecast,
    emd_forecast,
    forecast_method,
    rolling_forecast,
    select_predictor,
)

__all__ = [
    "ArimaModel",
    "fit_ar",
    "predict_one_ar",
    "genie_forecast",
    "iir_filter",
    "iir_forecast",
    "LstmRegressor",
    "MinMaxScaler",
    "RnnModel",
    "TrainingDivergedError",
    "predict_one_rnn",
    "train_rnn",
    "update_rnn",
    "ForecastResult",
    "ForecastStepError",
    "direct_forecast",
    "emd_forecast",
    "forecast_method",
    "rolling_forecast",
    "select_predictor",
]
