from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from ..errors import ValidationError

FAMILIES = ("linreg", "mlp", "rf", "knn")
SELECTIONS = ("none", "greedy", "m5")

_FAMILY_FIELDS = {
    "linreg": ("selection", "ridge"),
    "mlp": ("lr", "momentum", "epochs", "hidden"),
    "rf": ("trees", "feat_fraction", "min_leaf", "bootstrap"),
    "knn": ("k", "distance"),
}


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters for one regressor.

    Only the fields of ``family`` matter; the rest keep their defaults and are
    left out of :meth:`to_dict`. ``hidden=None`` means ceil((n_features + 1) / 2).
    """

    family: str
    seed: int = 0
    # linreg
    selection: str = "none"
    ridge: float = 1e-8
    # mlp
    lr: float = 0.3
    momentum: float = 0.2
    epochs: int = 500
    hidden: int | None = None
    # rf
    trees: int = 100
    feat_fraction: float = 1.0
    min_leaf: int = 1
    bootstrap: bool = True
    # knn
    k: int = 5
    distance: str = "euclidean"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        f = self.family
        if f not in FAMILIES:
            raise ValidationError(f"unknown model family {f!r}; expected one of {FAMILIES}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if f == "linreg":
            if self.selection not in SELECTIONS:
                raise ValidationError(f"linreg.selection must be one of {SELECTIONS}")
            if not (self.ridge >= 0 and math.isfinite(self.ridge)):
                raise ValidationError("linreg.ridge must be a nonnegative number")
        elif f == "mlp":
            if not (self.lr >= 0 and math.isfinite(self.lr)):
                raise ValidationError("mlp.lr must be a nonnegative number")
            if not (self.momentum >= 0 and math.isfinite(self.momentum)):
                raise ValidationError("mlp.momentum must be a nonnegative number")
            if self.epochs < 1:
                raise ValidationError("mlp.epochs must be >= 1")
            if self.hidden is not None and self.hidden < 1:
                raise ValidationError("mlp.hidden must be >= 1")
        elif f == "rf":
            if self.trees < 1:
                raise ValidationError("rf.trees must be >= 1")
            if not 0 < self.feat_fraction <= 1:
                raise ValidationError("rf.feat_fraction must lie in (0, 1]")
            if self.min_leaf < 1:
                raise ValidationError("rf.min_leaf must be >= 1")
        elif f == "knn":
            if self.k < 1:
                raise ValidationError("knn.k must be >= 1")
            if self.distance != "euclidean":
                raise ValidationError("knn.distance must be 'euclidean'")

    @property
    def label(self) -> str:
        f = self.family
        if f == "linreg":
            return f"LinReg ({self.selection})"
        if f == "mlp":
            return f"MLP (lr={self.lr:g}, m={self.momentum:g})"
        if f == "rf":
            feats = "" if self.feat_fraction == 1 else f", {self.feat_fraction:.0%} feats"
            return f"RF (iters={self.trees}{feats})"
        return f"kNN (nn={self.k}, dist=euc)"

    def to_dict(self) -> dict:
        d = asdict(self)
        keep = ("family", "seed") + _FAMILY_FIELDS[self.family]
        return {k: d[k] for k in keep}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        if "family" not in d:
            raise ValidationError("model config needs a 'family'")
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValidationError(f"unknown model config keys: {sorted(unknown)}")
        allowed = {"family", "seed"} | set(_FAMILY_FIELDS.get(d["family"], ()))
        stray = set(d) - allowed
        if stray:
            raise ValidationError(
                f"keys {sorted(stray)} do not apply to family {d['family']!r}"
            )
        try:
            return cls(**d)
        except TypeError as exc:
            raise ValidationError(str(exc)) from exc

    def with_seed(self, seed: int) -> "ModelConfig":
        return replace(self, seed=seed)


def default_grid(seed: int = 0) -> list[ModelConfig]:
    """The fourteen model settings compared in the shared-task experiments."""
    return [
        ModelConfig("linreg", seed, selection="m5"),
        ModelConfig("linreg", seed, selection="greedy"),
        ModelConfig("linreg", seed, selection="none"),
        ModelConfig("mlp", seed, lr=0.005, momentum=0.2),
        ModelConfig("mlp", seed, lr=0.5, momentum=0.2),
        ModelConfig("mlp", seed, lr=0.005, momentum=0.002),
        ModelConfig("mlp", seed, lr=0.5, momentum=0.002),
        ModelConfig("mlp", seed, lr=0.0005, momentum=0.0002),
        ModelConfig("rf", seed, trees=100),
        ModelConfig("rf", seed, trees=100, feat_fraction=0.5),
        ModelConfig("rf", seed, trees=100, feat_fraction=0.75),
        ModelConfig("knn", seed, k=5),
        ModelConfig("knn", seed, k=10),
        ModelConfig("knn", seed, k=20),
    ]


def best_ffd_configs(seed: int = 0) -> list[ModelConfig]:
    """Best setting per family for first-fixation duration (RF first)."""
    return [
        ModelConfig("rf", seed, trees=100),
        ModelConfig("linreg", seed, selection="m5"),
        ModelConfig("mlp", seed, lr=0.005, momentum=0.2),
        ModelConfig("knn", seed, k=5),
    ]


def best_trt_configs(seed: int = 0) -> list[ModelConfig]:
    """Best setting per family for total reading time (RF first)."""
    return [
        ModelConfig("rf", seed, trees=100, feat_fraction=0.75),
        ModelConfig("linreg", seed, selection="m5"),
        ModelConfig("mlp", seed, lr=0.005, momentum=0.2),
        ModelConfig("knn", seed, k=20),
    ]
