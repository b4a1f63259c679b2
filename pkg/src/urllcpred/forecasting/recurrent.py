"""
Recurrent one-step predictor.

A stacked LSTM with a linear dense head, written directly in numpy with
backpropagation through time and the Adam optimiser. Each LSTM layer keeps
its weights in one matrix of shape (1 + n_in + H, 4H): the first row is the
bias, then input and recurrent weights. Gate blocks along the columns are
[candidate, input, forget, output].

Training is deterministic for a fixed seed: batches are visited in a
seed-derived order and every reduction runs in a fixed sequence.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import RecurrentSpec, RefitPolicy
from ..data.validators import InvalidArgumentError, validate_series
from ..utils.logging_config import log
from ..utils.rng import SeedLike, make_generator


class TrainingDivergedError(RuntimeError):
    """Training loss became NaN or infinite."""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"training diverged at epoch {epoch} (loss={loss})")
        self.epoch = epoch
        self.loss = loss


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _activation(name: str, x: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(x, 0.0)
    return np.tanh(x)


def _activation_grad(name: str, pre: np.ndarray, post: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (pre > 0).astype(float)
    return 1.0 - post ** 2


class LstmRegressor:
    """
    Stacked LSTM -> dense(1) regressor trained on mean squared error.

    Inputs have shape (window, batch, n_inputs); outputs (batch, 1).
    """

    def __init__(self, spec: RecurrentSpec, rng: np.random.Generator, n_inputs: int = 1):
        self.spec = spec
        self.n_inputs = n_inputs
        self.params: Dict[str, np.ndarray] = {}

        fan_in = n_inputs
        for k, units in enumerate(spec.hidden_units):
            limit = 1.0 / np.sqrt(fan_in + units)
            W = rng.uniform(-limit, limit, size=(1 + fan_in + units, 4 * units))
            W[0, :] = 0.0
            W[0, 2 * units:3 * units] = 1.0  # forget-gate bias
            self.params[f"lstm{k}_W"] = W
            fan_in = units

        limit = 1.0 / np.sqrt(fan_in)
        self.params["dense_W"] = rng.uniform(-limit, limit, size=(fan_in, 1))
        self.params["dense_b"] = np.zeros(1)

        self._adam_m = {name: np.zeros_like(p) for name, p in self.params.items()}
        self._adam_v = {name: np.zeros_like(p) for name, p in self.params.items()}
        self._adam_t = 0

    # -- forward / backward -------------------------------------------------

    def _layer_forward(self, X: np.ndarray, W: np.ndarray) -> Tuple[np.ndarray, dict]:
        act = self.spec.cell_activation
        n_steps, batch, n_in = X.shape
        H = W.shape[1] // 4

        Hin = np.zeros((n_steps, batch, 1 + n_in + H))
        IFOG = np.zeros((n_steps, batch, 4 * H))
        IFOGf = np.zeros_like(IFOG)
        C = np.zeros((n_steps, batch, H))
        Ct = np.zeros_like(C)
        Hout = np.zeros_like(C)

        prev_h = np.zeros((batch, H))
        prev_c = np.zeros((batch, H))
        for t in range(n_steps):
            Hin[t, :, 0] = 1.0
            Hin[t, :, 1:n_in + 1] = X[t]
            Hin[t, :, n_in + 1:] = prev_h
            IFOG[t] = Hin[t] @ W
            IFOGf[t, :, :H] = _activation(act, IFOG[t, :, :H])
            IFOGf[t, :, H:] = _sigmoid(IFOG[t, :, H:])
            C[t] = IFOGf[t, :, :H] * IFOGf[t, :, H:2 * H] + IFOGf[t, :, 2 * H:3 * H] * prev_c
            Ct[t] = _activation(act, C[t])
            Hout[t] = IFOGf[t, :, 3 * H:] * Ct[t]
            prev_h, prev_c = Hout[t], C[t]

        cache = {"Hin": Hin, "IFOG": IFOG, "IFOGf": IFOGf, "C": C, "Ct": Ct, "W": W}
        return Hout, cache

    def _layer_backward(self, dHout: np.ndarray, cache: dict) -> Tuple[np.ndarray, np.ndarray]:
        act = self.spec.cell_activation
        Hin, IFOG, IFOGf, C, Ct, W = (cache[k] for k in ("Hin", "IFOG", "IFOGf", "C", "Ct", "W"))
        n_steps, batch, _ = Hin.shape
        H = W.shape[1] // 4
        n_in = Hin.shape[2] - H - 1

        dHout = dHout.copy()
        dW = np.zeros_like(W)
        dC = np.zeros_like(C)
        dX = np.zeros((n_steps, batch, n_in))
        dIFOGf = np.zeros((batch, 4 * H))
        dIFOG = np.zeros((batch, 4 * H))

        for t in reversed(range(n_steps)):
            g = IFOGf[t, :, :H]
            i = IFOGf[t, :, H:2 * H]
            f = IFOGf[t, :, 2 * H:3 * H]
            o = IFOGf[t, :, 3 * H:]
            prev_c = C[t - 1] if t > 0 else np.zeros((batch, H))

            dIFOGf[:, 3 * H:] = Ct[t] * dHout[t]
            dC[t] += _activation_grad(act, C[t], Ct[t]) * o * dHout[t]
            dIFOGf[:, 2 * H:3 * H] = dC[t] * prev_c
            if t > 0:
                dC[t - 1] += dC[t] * f
            dIFOGf[:, :H] = dC[t] * i
            dIFOGf[:, H:2 * H] = dC[t] * g

            dIFOG[:, :H] = _activation_grad(act, IFOG[t, :, :H], g) * dIFOGf[:, :H]
            gates = IFOGf[t, :, H:]
            dIFOG[:, H:] = gates * (1.0 - gates) * dIFOGf[:, H:]

            dW += Hin[t].T @ dIFOG
            dHin = dIFOG @ W.T
            dX[t] = dHin[:, 1:n_in + 1]
            if t > 0:
                dHout[t - 1] += dHin[:, n_in + 1:]

        return dX, dW

    def forward(self, X: np.ndarray) -> Tuple[np.ndarray, List[dict], np.ndarray]:
        caches = []
        layer_input = X
        for k in range(len(self.spec.hidden_units)):
            layer_input, cache = self._layer_forward(layer_input, self.params[f"lstm{k}_W"])
            caches.append(cache)
        last = layer_input[-1]
        y_hat = last @ self.params["dense_W"] + self.params["dense_b"]
        return y_hat, caches, last

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Predictions of shape (batch,)."""
        return self.forward(X)[0][:, 0]

    def loss_and_gradients(self, X: np.ndarray, y: np.ndarray) -> Tuple[float, Dict[str, np.ndarray]]:
        """
        Mean squared error and its gradient with respect to every parameter.

        Args:
            X: Inputs of shape (window, batch, n_inputs).
            y: Targets of shape (batch,).

        Returns:
            (loss, gradients keyed like ``params``).
        """
        y_hat, caches, last = self.forward(X)
        err = y_hat[:, 0] - y
        loss = float(np.mean(err ** 2))

        dy = (2.0 / err.size) * err[:, None]
        grads = {
            "dense_W": last.T @ dy,
            "dense_b": dy.sum(axis=0),
        }
        n_steps = X.shape[0]
        dHout = np.zeros((n_steps,) + last.shape)
        dHout[-1] = dy @ self.params["dense_W"].T
        for k in reversed(range(len(caches))):
            dHout, grads[f"lstm{k}_W"] = self._layer_backward(dHout, caches[k])
        return loss, grads

    # -- optimisation -------------------------------------------------------

    def adam_step(self, grads: Dict[str, np.ndarray]) -> None:
        spec = self.spec
        self._adam_t += 1
        correction1 = 1.0 - spec.beta1 ** self._adam_t
        correction2 = 1.0 - spec.beta2 ** self._adam_t
        for name in sorted(self.params):
            g = grads[name]
            m = self._adam_m[name]
            v = self._adam_v[name]
            m *= spec.beta1
            m += (1.0 - spec.beta1) * g
            v *= spec.beta2
            v += (1.0 - spec.beta2) * g * g
            self.params[name] -= (
                spec.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + spec.adam_eps)
            )

    def fit(self, X: np.ndarray, y: np.ndarray, epochs: int, rng: np.random.Generator) -> List[float]:
        """
        Mini-batch Adam training.

        Args:
            X: Inputs of shape (window, n_pairs, n_inputs).
            y: Targets of shape (n_pairs,).
            epochs: Passes over the data.
            rng: Generator for the batch order.

        Returns:
            Per-epoch mean training loss.

        Raises:
            TrainingDivergedError: If the loss stops being finite.
        """
        n_pairs = y.size
        batch = min(self.spec.batch_size, n_pairs)
        history = []
        for epoch in range(epochs):
            order = rng.permutation(n_pairs)
            total = 0.0
            for start in range(0, n_pairs, batch):
                idx = order[start:start + batch]
                loss, grads = self.loss_and_gradients(X[:, idx], y[idx])
                if not np.isfinite(loss):
                    raise TrainingDivergedError(epoch, loss)
                self.adam_step(grads)
                total += loss * idx.size
            history.append(total / n_pairs)
            if epoch % 10 == 0 or epoch == epochs - 1:
                log.debug(f"epoch {epoch}: loss {history[-1]:.6g}")
        return history


@dataclass(frozen=True)
class MinMaxScaler:
    """Min-max normalisation to [0, 1] fitted on a training region."""
    minimum: float
    scale: float

    @classmethod
    def fit(cls, values: np.ndarray) -> "MinMaxScaler":
        low, high = float(np.min(values)), float(np.max(values))
        return cls(minimum=low, scale=(high - low) if high > low else 1.0)

    def transform(self, values):
        return (np.asarray(values, dtype=float) - self.minimum) / self.scale

    def inverse(self, values):
        return np.asarray(values, dtype=float) * self.scale + self.minimum


@dataclass
class RnnModel:
    """A trained regressor with its scaler and training stream."""
    spec: RecurrentSpec
    network: LstmRegressor
    scaler: MinMaxScaler
    rng: np.random.Generator
    loss_history: List[float]


def make_supervised_pairs(values: np.ndarray, window: int, recent: Optional[int] = None):
    """
    Sliding (window -> next value) pairs.

    Args:
        values: Normalised series.
        window: Input length.
        recent: Keep only the newest ``recent`` pairs.

    Returns:
        (X of shape (window, n_pairs, 1), y of shape (n_pairs,)).
    """
    n_pairs = values.size - window
    if n_pairs < 1:
        raise InvalidArgumentError(f"need more than window={window} samples, got {values.size}")
    first = 0 if recent is None else max(0, n_pairs - recent)
    windows = np.lib.stride_tricks.sliding_window_view(values[:-1], window)[first:]
    X = np.ascontiguousarray(windows.T)[:, :, None]
    y = values[window + first:]
    return X, y.copy()


def train_rnn(series, spec: RecurrentSpec = RecurrentSpec(), seed: SeedLike = 0) -> RnnModel:
    """
    Train the recurrent predictor on a series.

    The series is min-max normalised on its own range, cut into sliding
    (window -> next) pairs, and fitted for ``spec.epochs`` epochs.

    Args:
        series: Training region.
        spec: Network and optimiser settings.
        seed: Integer seed or stream.

    Returns:
        RnnModel.
    """
    x = validate_series(series, name="series", min_length=spec.window + 1)
    rng = make_generator(seed)
    scaler = MinMaxScaler.fit(x)
    network = LstmRegressor(spec, rng)
    X, y = make_supervised_pairs(scaler.transform(x), spec.window)
    losses = network.fit(X, y, spec.epochs, rng)
    return RnnModel(spec=spec, network=network, scaler=scaler, rng=rng, loss_history=losses)


def predict_one_rnn(model: RnnModel, history) -> float:
    """One-step forecast from the last ``window`` samples of the history."""
    window = model.spec.window
    recent = np.asarray(history, dtype=float)[-window:]
    if recent.size < window:
        raise InvalidArgumentError(f"history shorter than window={window}")
    X = model.scaler.transform(recent)[:, None, None]
    return float(model.scaler.inverse(model.network.predict(X))[0])


def update_rnn(model: RnnModel, history, policy: RefitPolicy) -> None:
    """
    Update a model in place after a new observation was appended.

    ``fine_tune`` trains on the newest pairs with the model's own stream;
    ``full`` re-initialises and retrains on the whole history; ``none``
    leaves the weights untouched. The scaler stays as fitted on the
    training region.
    """
    if policy.mode == "none":
        return
    values = model.scaler.transform(np.asarray(history, dtype=float))
    if policy.mode == "full":
        X, y = make_supervised_pairs(values, model.spec.window)
        model.network = LstmRegressor(model.spec, model.rng)
        model.loss_history.extend(model.network.fit(X, y, model.spec.epochs, model.rng))
        return
    X, y = make_supervised_pairs(values, model.spec.window, recent=policy.recent_pairs)
    model.loss_history.extend(model.network.fit(X, y, policy.epochs, model.rng))
