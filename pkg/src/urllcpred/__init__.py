"""
URLLC interference prediction package

Simulates aggregate interference under Rayleigh block fading, predicts it
with EMD-decomposed ARIMA and LSTM forecasters, and allocates
finite-blocklength channel uses from the predicted SINR.
"""

__version__ = "0.1.0"

from .config import (
    ArimaSpec,
    ExperimentConfig,
    IirParams,
    LinkConfig,
    Method,
    ProjectPaths,
    RecurrentSpec,
    RefitPolicy,
    SiftParams,
    TrainValSplit,
    get_paths,
    load_config,
)

__all__ = [
    "ArimaSpec",
    "ExperimentConfig",
    "IirParams",
    "LinkConfig",
    "Method",
    "ProjectPaths",
    "RecurrentSpec",
    "RefitPolicy",
    "SiftParams",
    "TrainValSplit",
    "get_paths",
    "load_config",
]
