"""Least-squares linear regression with optional backward feature selection.

Features are standardized before solving, with a small ridge term as a
stabilizer. Selection compares models with the Akaike information
criterion ``n * ln(SSE / n) + 2 * (k + 1)``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import NumericError, ValidationError
from .base import TrainedModel, register
from .config import ModelConfig
from .dataset import Dataset

_TINY_MSE = 1e-300


def _solve(Z: np.ndarray, yc: np.ndarray, cols, ridge: float) -> np.ndarray:
    if not cols:
        return np.zeros(0)
    A = Z[:, cols]
    gram = A.T @ A
    if ridge == 0:
        if np.linalg.matrix_rank(A) < len(cols):
            raise NumericError(
                f"singular least-squares system ({A.shape[0]} rows, {len(cols)} features); "
                "use ridge > 0"
            )
    else:
        gram = gram + ridge * np.eye(len(cols))
    try:
        return np.linalg.solve(gram, A.T @ yc)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"least-squares solve failed: {exc}") from exc


def aic(sse: float, n: int, k: int) -> float:
    """AIC of a Gaussian linear model with k slopes and an intercept."""
    return n * math.log(max(sse / n, _TINY_MSE)) + 2 * (k + 1)


def _fit_aic(Z, yc, cols, ridge):
    beta = _solve(Z, yc, cols, ridge)
    resid = yc - Z[:, cols] @ beta if cols else yc
    return beta, aic(float(resid @ resid), len(yc), len(cols))


def select_features(Z, yc, ridge, selection):
    """Return the kept column indices and their standardized coefficients."""
    cols = list(range(Z.shape[1]))
    beta, score = _fit_aic(Z, yc, cols, ridge)
    if selection == "greedy":
        while cols:
            best = None
            for j in cols:
                trial = [c for c in cols if c != j]
                b, s = _fit_aic(Z, yc, trial, ridge)
                if best is None or s < best[2]:
                    best = (trial, b, s)
            if best[2] < score:
                cols, beta, score = best
            else:
                break
    elif selection == "m5":
        while cols:
            drop = int(np.argmin(np.abs(beta)))
            trial = cols[:drop] + cols[drop + 1 :]
            b, s = _fit_aic(Z, yc, trial, ridge)
            if s < score:
                cols, beta, score = trial, b, s
            else:
                break
    return cols, beta


def train_linreg(data: Dataset, cfg: ModelConfig) -> TrainedModel:
    if cfg.family != "linreg":
        raise ValidationError(f"expected a linreg config, got {cfg.family!r}")
    if len(data) == 0:
        raise ValidationError("cannot fit a regression on an empty dataset")
    X, y = data.X, data.y
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    Z = (X - mean) / std
    y_mean = float(y.mean())
    cols, beta = select_features(Z, y - y_mean, cfg.ridge, cfg.selection)

    std_coef = np.zeros(X.shape[1])
    std_coef[cols] = beta
    coef = std_coef / std
    intercept = y_mean - float(coef @ mean)
    return TrainedModel(
        cfg,
        data.feature_names,
        {"mean": mean, "std": std},
        {
            "coef": coef,
            "intercept": intercept,
            "standardized_coef": std_coef,
            "selected": [data.feature_names[c] for c in cols],
        },
    )


def _predict(model, X):
    p = model.parameters
    return X @ p["coef"] + p["intercept"]


def _encode(p):
    return {
        "coef": p["coef"].tolist(),
        "intercept": float(p["intercept"]),
        "standardized_coef": p["standardized_coef"].tolist(),
        "selected": list(p["selected"]),
    }


def _decode(d):
    return {
        "coef": np.asarray(d["coef"], dtype=np.float64),
        "intercept": float(d["intercept"]),
        "standardized_coef": np.asarray(d["standardized_coef"], dtype=np.float64),
        "selected": list(d["selected"]),
    }


register("linreg", _predict, _encode, _decode)
