"""
Configuration module for the interference-prediction simulator.

Holds every parameter group as a frozen dataclass with documented defaults,
the named presets, and the loader for flat dotted-key config files.
"""

import dataclasses
import enum
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from .data.validators import (
    InvalidArgumentError,
    check_count,
    check_positive,
    check_probability,
)


class ConfigError(InvalidArgumentError):
    """Raised for unreadable config files, unknown keys or invalid values."""
    pass


class Method(str, enum.Enum):
    """Interference predictors compared by the experiment."""

    AR_EMD = "ar_emd"
    AR_DIRECT = "ar_direct"
    RNN_EMD = "rnn_emd"
    RNN_DIRECT = "rnn_direct"
    HYBRID_EMD = "hybrid_emd"
    IIR = "iir"
    GENIE = "genie"

    @property
    def column(self) -> str:
        """Column name in the prediction CSV."""
        return f"pred_{self.value}"

    @property
    def uses_emd(self) -> bool:
        return self in (Method.AR_EMD, Method.RNN_EMD, Method.HYBRID_EMD)

    @property
    def is_baseline(self) -> bool:
        return self in (Method.IIR, Method.GENIE)


DEFAULT_METHODS = (
    Method.AR_EMD,
    Method.AR_DIRECT,
    Method.RNN_EMD,
    Method.RNN_DIRECT,
    Method.IIR,
    Method.GENIE,
)


class _Section:
    """Mixin giving parameter groups a plain-dict echo."""

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: _plain(getattr(self, f.name)) for f in dataclasses.fields(self)}


@dataclass(frozen=True)
class LinkConfig(_Section):
    """
    Downlink with N non-cooperating Rayleigh block-faded interferers.

    Powers are linear and normalised to the noise power ``noise_power``;
    mean INRs and the desired mean SNR are given in dB.
    """
    n_interferers: int = 5
    interferer_mean_inr_db: Tuple[float, ...] = (5.0, 3.0, 0.0, -2.0, -5.0)
    desired_mean_snr_db: float = 20.0
    noise_power: float = 1.0
    n_samples: int = 1000
    coherence_block_len: int = 1
    # gain correlation between consecutive coherence blocks; 0 gives independent blocks
    fading_correlation: float = 0.9
    rng_seed: int = 0
    faded_desired: bool = False
    # (gamma_min, gamma_max) in dB; when set, INRs are drawn uniformly per seed
    inr_range_db: Optional[Tuple[float, float]] = None
    keep_per_interferer: bool = True

    def __post_init__(self):
        object.__setattr__(
            self, "interferer_mean_inr_db", tuple(float(v) for v in self.interferer_mean_inr_db)
        )
        check_count("n_interferers", self.n_interferers)
        check_count("n_samples", self.n_samples, minimum=2)
        check_count("coherence_block_len", self.coherence_block_len)
        check_positive("noise_power", self.noise_power)
        if not (math.isfinite(self.fading_correlation) and 0 <= self.fading_correlation < 1):
            raise InvalidArgumentError(f"fading_correlation must lie in [0, 1), got {self.fading_correlation!r}")
        if not math.isfinite(self.desired_mean_snr_db):
            raise InvalidArgumentError("desired_mean_snr_db must be finite")

        if self.inr_range_db is not None:
            low, high = (float(v) for v in self.inr_range_db)
            object.__setattr__(self, "inr_range_db", (low, high))
            if not (math.isfinite(low) and math.isfinite(high)) or low > high:
                raise InvalidArgumentError(f"inr_range_db must be finite with low <= high, got {self.inr_range_db}")
            strongest = high
        else:
            if len(self.interferer_mean_inr_db) != self.n_interferers:
                raise InvalidArgumentError(
                    f"interferer_mean_inr_db has {len(self.interferer_mean_inr_db)} entries, "
                    f"expected n_interferers={self.n_interferers}"
                )
            if not all(math.isfinite(v) for v in self.interferer_mean_inr_db):
                raise InvalidArgumentError("interferer_mean_inr_db must be finite")
            strongest = max(self.interferer_mean_inr_db)

        # the serving cell is the strongest link
        if not strongest < self.desired_mean_snr_db:
            raise InvalidArgumentError(
                f"strongest interferer INR {strongest} dB must be below the desired SNR "
                f"{self.desired_mean_snr_db} dB"
            )

    def to_dict(self) -> Dict[str, Any]:
        d = super().to_dict()
        # the list is ignored when INRs are drawn from a range
        if self.inr_range_db is not None:
            del d["interferer_mean_inr_db"]
        return d

    @property
    def desired_power(self) -> float:
        """Mean desired received power S = N0 * 10^(SNR/10)."""
        return self.noise_power * 10.0 ** (self.desired_mean_snr_db / 10.0)

    def with_seed(self, seed: int) -> "LinkConfig":
        return dataclasses.replace(self, rng_seed=int(seed))


@dataclass(frozen=True)
class TrainValSplit(_Section):
    """Split of a length-T series into P training and M validation samples."""
    train_len: int
    val_len: int
    train_fraction: float = 0.8

    def __post_init__(self):
        check_count("train_len", self.train_len)
        check_count("val_len", self.val_len)

    @property
    def total(self) -> int:
        return self.train_len + self.val_len

    @classmethod
    def from_fraction(cls, total: int, train_fraction: float = 0.8) -> "TrainValSplit":
        """Split ``total`` samples with P = floor(fraction * T), M = T - P."""
        check_probability("train_fraction", train_fraction)
        train_len = int(math.floor(train_fraction * total))
        return cls(train_len=train_len, val_len=total - train_len, train_fraction=train_fraction)

    def validate_for(self, length: int, min_train: int = 1) -> None:
        """Check that the split matches a series and leaves enough training history."""
        if self.total != length:
            raise InvalidArgumentError(
                f"split covers {self.total} samples (P={self.train_len}, M={self.val_len}) "
                f"but the series has {length}"
            )
        if self.train_len < min_train:
            raise InvalidArgumentError(
                f"training region of {self.train_len} samples is shorter than the "
                f"required {min_train}"
            )


@dataclass(frozen=True)
class SiftParams(_Section):
    """Sifting controls for empirical mode decomposition."""
    sd_threshold: float = 0.2
    max_sift_iters: int = 100
    max_imfs: int = 12
    boundary_mode: str = "mirror"
    spline: str = "natural-cubic"

    def __post_init__(self):
        check_positive("sd_threshold", self.sd_threshold)
        check_count("max_sift_iters", self.max_sift_iters)
        check_count("max_imfs", self.max_imfs)
        if self.boundary_mode != "mirror":
            raise InvalidArgumentError(f"unsupported boundary_mode {self.boundary_mode!r}")
        if self.spline != "natural-cubic":
            raise InvalidArgumentError(f"unsupported spline {self.spline!r}")


@dataclass(frozen=True)
class ArimaSpec(_Section):
    """
    ARIMA(p, d, q) predictor fitted by least squares.

    ``window`` is the number of most recent differenced samples used as
    regression targets; None uses the whole available history.
    """
    p: int = 30
    d: int = 1
    q: int = 0
    window: Optional[int] = None

    def __post_init__(self):
        check_count("p", self.p, minimum=0)
        check_count("d", self.d, minimum=0)
        check_count("q", self.q, minimum=0)
        if self.window is not None:
            check_count("window", self.window)
            if self.window < self.p + self.d:
                raise InvalidArgumentError(
                    f"window={self.window} must be >= p + d = {self.p + self.d}"
                )

    @property
    def min_history(self) -> int:
        """Samples needed before the first fit."""
        rows = self.window if self.window is not None else 1
        return rows + self.p + self.d


@dataclass(frozen=True)
class RecurrentSpec(_Section):
    """
    Stacked LSTM regressor with a dense output head.

    Gates use the logistic sigmoid; ``cell_activation`` is applied to the
    candidate and to the cell output ("tanh" or "relu").
    """
    hidden_units: Tuple[int, ...] = (100, 100)
    dense_units: int = 1
    epochs: int = 100
    window: int = 30
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-7
    batch_size: int = 128
    cell_activation: str = "tanh"
    loss: str = "mse"

    def __post_init__(self):
        object.__setattr__(self, "hidden_units", tuple(int(u) for u in self.hidden_units))
        if not self.hidden_units:
            raise InvalidArgumentError("hidden_units needs at least one layer")
        for units in self.hidden_units:
            check_count("hidden_units", units)
        if self.dense_units != 1:
            raise InvalidArgumentError("dense_units must be 1 (one-step scalar forecast)")
        check_count("epochs", self.epochs)
        check_count("window", self.window)
        check_count("batch_size", self.batch_size)
        check_positive("learning_rate", self.learning_rate)
        check_probability("beta1", self.beta1)
        check_probability("beta2", self.beta2)
        check_positive("adam_eps", self.adam_eps)
        if self.cell_activation not in ("tanh", "relu"):
            raise InvalidArgumentError(f"cell_activation must be 'tanh' or 'relu', got {self.cell_activation!r}")
        if self.loss != "mse":
            raise InvalidArgumentError(f"unsupported loss {self.loss!r}")


@dataclass(frozen=True)
class RefitPolicy(_Section):
    """
    How the recurrent model is updated during the validation walk.

    An update runs after every ``every`` steps. ``fine_tune`` trains ``epochs``
    more epochs on the ``recent_pairs`` newest window->next pairs, ``full``
    retrains from scratch on the whole history, ``none`` keeps the weights
    and only slides the input window.
    """
    mode: str = "fine_tune"
    epochs: int = 5
    recent_pairs: int = 64
    every: int = 10

    def __post_init__(self):
        if self.mode not in ("fine_tune", "full", "none"):
            raise InvalidArgumentError(f"refit mode must be fine_tune, full or none, got {self.mode!r}")
        check_count("epochs", self.epochs)
        check_count("recent_pairs", self.recent_pairs)
        check_count("every", self.every)
        if self.mode == "fine_tune" and self.recent_pairs < self.every:
            raise InvalidArgumentError(
                f"recent_pairs={self.recent_pairs} must cover the {self.every} steps between updates"
            )


@dataclass(frozen=True)
class IirParams(_Section):
    """First-order IIR interference estimator."""
    alpha: float = 0.01
    init_estimate: Optional[float] = None
    # True: estimate t uses x[t-2] instead of x[t-1]
    literal_index: bool = False

    def __post_init__(self):
        check_probability("alpha", self.alpha)
        if self.init_estimate is not None and not (
            math.isfinite(self.init_estimate) and self.init_estimate >= 0
        ):
            raise InvalidArgumentError(f"init_estimate must be a finite power >= 0, got {self.init_estimate}")


@dataclass(frozen=True)
class ExperimentConfig(_Section):
    """Full parameterisation of one Monte-Carlo experiment."""
    link: LinkConfig = field(default_factory=LinkConfig)
    train_fraction: float = 0.8
    sift: SiftParams = field(default_factory=SiftParams)
    arima: ArimaSpec = field(default_factory=ArimaSpec)
    rnn: RecurrentSpec = field(default_factory=RecurrentSpec)
    refit: RefitPolicy = field(default_factory=RefitPolicy)
    iir: IirParams = field(default_factory=IirParams)
    payload_bits: int = 50
    target_eps_list: Tuple[float, ...] = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1)
    n_seeds: int = 20
    methods: Tuple[Method, ...] = DEFAULT_METHODS
    integer_R: bool = False
    output_dir: Path = Path("output")
    n_workers: int = 4
    component_workers: int = 1
    selection_len: int = 20
    arima_overrides: Mapping[str, ArimaSpec] = field(default_factory=dict)
    rnn_overrides: Mapping[str, RecurrentSpec] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "target_eps_list", tuple(float(e) for e in self.target_eps_list))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        object.__setattr__(self, "output_dir", Path(self.output_dir))

        check_count("payload_bits", self.payload_bits)
        check_count("n_seeds", self.n_seeds)
        check_count("n_workers", self.n_workers)
        check_count("component_workers", self.component_workers)
        check_count("selection_len", self.selection_len)
        if not self.target_eps_list:
            raise InvalidArgumentError("target_eps_list must not be empty")
        for eps in self.target_eps_list:
            check_probability("target_eps_list", eps)
        if list(self.target_eps_list) != sorted(set(self.target_eps_list)):
            raise InvalidArgumentError("target_eps_list must be strictly ascending")
        if not self.methods:
            raise InvalidArgumentError("methods must name at least one predictor")
        if len(set(self.methods)) != len(self.methods):
            raise InvalidArgumentError("methods contains duplicates")

        split = self.split
        needs_ar = any(m in (Method.AR_EMD, Method.AR_DIRECT, Method.HYBRID_EMD) for m in self.methods)
        needs_rnn = any(m in (Method.RNN_EMD, Method.RNN_DIRECT, Method.HYBRID_EMD) for m in self.methods)
        arima_history = max(spec.min_history for spec in (self.arima, *self.arima_overrides.values()))
        rnn_history = max(spec.window + 1 for spec in (self.rnn, *self.rnn_overrides.values()))
        if needs_ar:
            split.validate_for(self.link.n_samples, min_train=arima_history)
        if needs_rnn:
            split.validate_for(self.link.n_samples, min_train=rnn_history)
        if Method.HYBRID_EMD in self.methods:
            holdout_floor = max(arima_history, rnn_history)
            if split.train_len - self.selection_len < holdout_floor:
                raise InvalidArgumentError(
                    f"selection_len={self.selection_len} leaves too little training history"
                )

    @property
    def split(self) -> TrainValSplit:
        return TrainValSplit.from_fraction(self.link.n_samples, self.train_fraction)

    @property
    def seeds(self) -> Tuple[int, ...]:
        return tuple(self.link.rng_seed + k for k in range(self.n_seeds))

    def arima_for(self, component: str) -> ArimaSpec:
        return self.arima_overrides.get(component, self.arima)

    def rnn_for(self, component: str) -> RecurrentSpec:
        return self.rnn_overrides.get(component, self.rnn)


def _plain(value: Any) -> Any:
    if isinstance(value, _Section):
        return value.to_dict()
    if dataclasses.is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Path):
        return value.as_posix()
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class ProjectPaths:
    """
    Project path configuration.
    """
    root: Path

    @property
    def configs(self) -> Path:
        """Directory of shipped config files."""
        return self.root / "configs"

    def config_file(self, name: str) -> Path:
        """Shipped config file for a bare name such as ``example``."""
        return self.configs / f"{name}.toml"

    def resolve_output(self, output_dir: Path) -> Path:
        """Relative output directories are taken from the project root."""
        output_dir = Path(output_dir)
        return output_dir if output_dir.is_absolute() else self.root / output_dir


def get_paths(root_path: Optional[Path] = None) -> ProjectPaths:
    """
    Project paths, derived from this file's location unless given.
    """
    if root_path is None:
        root_path = Path(__file__).parent.parent.parent
    return ProjectPaths(root=Path(root_path))


# ---------------------------------------------------------------------------
# Presets and config files
# ---------------------------------------------------------------------------

def _smoke_config() -> ExperimentConfig:
    return ExperimentConfig(
        link=LinkConfig(n_samples=200),
        arima=ArimaSpec(p=5),
        rnn=RecurrentSpec(hidden_units=(8, 8), epochs=5, window=10, batch_size=16),
        refit=RefitPolicy(epochs=1, recent_pairs=16),
        n_seeds=2,
    )


PRESETS = {
    "default": ExperimentConfig,
    "table1_preset": lambda: ExperimentConfig(link=LinkConfig(n_samples=100)),
    "smoke": _smoke_config,
}

_SECTIONS = {
    "link": LinkConfig,
    "sift": SiftParams,
    "arima": ArimaSpec,
    "rnn": RecurrentSpec,
    "refit": RefitPolicy,
    "iir": IirParams,
}
_SPLIT_KEYS = {"train_fraction"}
_EXPERIMENT_KEYS = {
    "payload_bits", "target_eps_list", "n_seeds", "methods", "integer_R",
    "output_dir", "n_workers", "component_workers", "selection_len",
}
_OVERRIDE_SECTIONS = {"arima_override": ArimaSpec, "rnn_override": RecurrentSpec}


def _flatten(table: Mapping[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat = {}
    for key, value in table.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(_flatten(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def _coerce(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_coerce(v) for v in value)
    return value


def _field_names(cls) -> set:
    return {f.name for f in dataclasses.fields(cls)}


def apply_overrides(base: ExperimentConfig, flat: Mapping[str, Any]) -> ExperimentConfig:
    """
    Apply flat dotted-key settings to a config.

    Args:
        base: Configuration to start from.
        flat: Mapping such as ``{"link.n_interferers": 5, "rnn.epochs": 20}``.

    Returns:
        New ExperimentConfig.

    Raises:
        ConfigError: On unknown keys or values violating an invariant.
    """
    sections: Dict[str, Dict[str, Any]] = {name: {} for name in _SECTIONS}
    top: Dict[str, Any] = {}
    overrides: Dict[str, Dict[str, Dict[str, Any]]] = {name: {} for name in _OVERRIDE_SECTIONS}

    for key, raw in flat.items():
        value = _coerce(raw)
        parts = key.split(".")
        head = parts[0]
        if head in _SECTIONS and len(parts) == 2 and parts[1] in _field_names(_SECTIONS[head]):
            sections[head][parts[1]] = value
        elif head == "split" and len(parts) == 2 and parts[1] in _SPLIT_KEYS:
            top[parts[1]] = value
        elif head == "experiment" and len(parts) == 2 and parts[1] in _EXPERIMENT_KEYS:
            top[parts[1]] = value
        elif (
            head in _OVERRIDE_SECTIONS
            and len(parts) == 3
            and _is_component_name(parts[1])
            and parts[2] in _field_names(_OVERRIDE_SECTIONS[head])
        ):
            overrides[head].setdefault(parts[1], {})[parts[2]] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")

    try:
        changes: Dict[str, Any] = dict(top)
        for name, values in sections.items():
            if values:
                changes[name] = dataclasses.replace(getattr(base, name), **values)
        for name, per_component in overrides.items():
            if not per_component:
                continue
            attr = f"{name}s"
            default_spec = base.arima if name == "arima_override" else base.rnn
            merged = dict(getattr(base, attr))
            for component, values in per_component.items():
                merged[component] = dataclasses.replace(merged.get(component, default_spec), **values)
            changes[attr] = merged
        return dataclasses.replace(base, **changes)
    except (InvalidArgumentError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid configuration value: {exc}") from exc


def _is_component_name(name: str) -> bool:
    return name == "residual" or (name.startswith("imf") and name[3:].isdigit() and int(name[3:]) >= 1)


def load_config(source: Union[str, Path, None] = None) -> ExperimentConfig:
    """
    Load an experiment configuration.

    Args:
        source: A preset name (``default``, ``table1_preset``, ``smoke``), a
            path to a flat dotted-key TOML file, the bare name of a file in
            the project ``configs`` directory, or None for the defaults.

    Returns:
        ExperimentConfig.

    Raises:
        ConfigError: If the file is missing, unparsable, or has unknown keys.
    """
    if source is None:
        return ExperimentConfig()
    if str(source) in PRESETS:
        return PRESETS[str(source)]()

    path = Path(source)
    if not path.is_file() and path.suffix == "" and len(path.parts) == 1:
        shipped = get_paths().config_file(path.name)
        if shipped.is_file():
            path = shipped
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as handle:
            table = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc

    flat = _flatten(table)
    base_name = flat.pop("experiment.preset", None)
    base = load_config(base_name) if base_name is not None else ExperimentConfig()
    return apply_overrides(base, flat)
