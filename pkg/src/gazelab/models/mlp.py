"""One-hidden-layer perceptron trained by per-sample SGD with momentum.

Sigmoid hidden units, one linear output. Inputs and targets are min-max
scaled to [0, 1]. All weights live in one flat vector ``theta``::

    [ W1 (hidden x n_inputs, row-major) | b1 (hidden) | w2 (hidden) | b2 ]

The per-sample loss is ``0.5 * (output - target) ** 2``; the velocity update
is ``v = momentum * v - lr * grad; theta += v``.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..errors import NumericError, ValidationError
from .base import TrainedModel, minmax_stats, register
from .config import ModelConfig
from .dataset import Dataset

INIT_RANGE = 0.5


def n_weights(n_inputs: int, hidden: int) -> int:
    return hidden * n_inputs + 2 * hidden + 1


def default_hidden(n_features: int) -> int:
    return math.ceil((n_features + 1) / 2)


@njit(cache=True)
def _forward(theta, x, p, h):
    b1 = h * p
    w2 = b1 + h
    out = theta[w2 + h]
    for j in range(h):
        z = theta[b1 + j]
        for i in range(p):
            z += theta[j * p + i] * x[i]
        out += theta[w2 + j] / (1.0 + math.exp(-z))
    return out


@njit(cache=True)
def sample_gradient(theta, x, y, p, h, grad):
    """Write d(0.5 * err**2)/d(theta) into ``grad``; return the network output."""
    b1 = h * p
    w2 = b1 + h
    b2 = w2 + h
    act = np.empty(h)
    out = theta[b2]
    for j in range(h):
        z = theta[b1 + j]
        for i in range(p):
            z += theta[j * p + i] * x[i]
        a = 1.0 / (1.0 + math.exp(-z))
        act[j] = a
        out += theta[w2 + j] * a
    err = out - y
    grad[b2] = err
    for j in range(h):
        grad[w2 + j] = err * act[j]
        d = err * theta[w2 + j] * act[j] * (1.0 - act[j])
        grad[b1 + j] = d
        for i in range(p):
            grad[j * p + i] = d * x[i]
    return out


@njit(cache=True)
def _batch_mse(theta, X, y, p, h):
    s = 0.0
    for r in range(X.shape[0]):
        e = _forward(theta, X[r], p, h) - y[r]
        s += e * e
    return s / X.shape[0]


@njit(cache=True)
def _sgd_epochs(theta, X, y, orders, lr, momentum, p, h, losses):
    """Run one epoch per row of ``orders``; stop early if the loss goes non-finite.

    Returns the number of epochs completed.
    """
    velocity = np.zeros_like(theta)
    grad = np.zeros_like(theta)
    for epoch in range(orders.shape[0]):
        for r in orders[epoch]:
            sample_gradient(theta, X[r], y[r], p, h, grad)
            for w in range(theta.shape[0]):
                velocity[w] = momentum * velocity[w] - lr * grad[w]
                theta[w] += velocity[w]
        loss = _batch_mse(theta, X, y, p, h)
        losses[epoch] = loss
        if not np.isfinite(loss):
            return epoch + 1
    return orders.shape[0]


def momentum_step(theta, velocity, grad, lr, momentum):
    """One classic momentum update, returning new (theta, velocity)."""
    velocity = momentum * velocity - lr * grad
    return theta + velocity, velocity


def loss(theta, X, y, hidden: int) -> float:
    """Mean of ``0.5 * err**2`` over the rows; the quantity SGD descends."""
    X = np.asarray(X, dtype=np.float64)
    return 0.5 * float(_batch_mse(np.asarray(theta, dtype=np.float64), X,
                                  np.asarray(y, dtype=np.float64), X.shape[1], hidden))


def gradient(theta, X, y, hidden: int) -> np.ndarray:
    """Analytic gradient of :func:`loss` (average of per-sample gradients)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    total = np.zeros_like(theta)
    grad = np.zeros_like(theta)
    for r in range(X.shape[0]):
        sample_gradient(theta, X[r], y[r], X.shape[1], hidden, grad)
        total += grad
    return total / X.shape[0]


def init_weights(n_inputs: int, hidden: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-INIT_RANGE, INIT_RANGE, n_weights(n_inputs, hidden))


def train_mlp(data: Dataset, cfg: ModelConfig) -> TrainedModel:
    if cfg.family != "mlp":
        raise ValidationError(f"expected an mlp config, got {cfg.family!r}")
    if len(data) == 0:
        raise ValidationError("cannot train on an empty dataset")
    p = data.n_features
    h = cfg.hidden or default_hidden(p)
    x_lo, x_span = minmax_stats(data.X)
    y_lo, y_span = minmax_stats(data.y[:, None])
    X = (data.X - x_lo) / x_span
    y = (data.y - y_lo[0]) / y_span[0]

    rng = np.random.default_rng(cfg.seed)
    theta = init_weights(p, h, rng)
    orders = np.stack([rng.permutation(len(data)) for _ in range(cfg.epochs)])
    losses = np.full(cfg.epochs, np.nan)
    done = _sgd_epochs(theta, X, y, orders, float(cfg.lr), float(cfg.momentum), p, h, losses)
    if not (np.isfinite(losses[:done]).all() and np.isfinite(theta).all()):
        raise NumericError(
            f"MLP diverged at epoch {done} (lr={cfg.lr}, momentum={cfg.momentum}); "
            f"last loss {losses[done - 1]}"
        )
    return TrainedModel(
        cfg,
        data.feature_names,
        {"x_min": x_lo, "x_span": x_span, "y_min": y_lo, "y_span": y_span},
        {"hidden": h, "theta": theta, "train_mse": losses},
    )


def _predict(model, X):
    norm = model.normalization
    h = model.parameters["hidden"]
    theta = model.parameters["theta"]
    Z = (X - norm["x_min"]) / norm["x_span"]
    out = np.array([_forward(theta, z, Z.shape[1], h) for z in Z])
    return out * norm["y_span"][0] + norm["y_min"][0]


def _encode(p):
    return {"hidden": int(p["hidden"]), "theta": p["theta"].tolist(),
            "train_mse": [float(v) for v in p["train_mse"]]}


def _decode(d):
    return {"hidden": int(d["hidden"]), "theta": np.asarray(d["theta"], dtype=np.float64),
            "train_mse": np.asarray(d["train_mse"], dtype=np.float64)}


register("mlp", _predict, _encode, _decode)
