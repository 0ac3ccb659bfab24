from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import row_sort_key
from ..errors import ValidationError


@dataclass(frozen=True)
class Dataset:
    """A feature matrix with one target column.

    ``row_ids`` are (language, sentence_id, word_id) triples; synthetic data
    may use any sortable ids.
    """

    feature_names: tuple
    X: np.ndarray
    y: np.ndarray
    row_ids: tuple

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64, order="C")
        y = np.array(self.y, dtype=np.float64).reshape(-1)
        if X.ndim != 2:
            raise ValidationError(f"X must be 2-D, got shape {X.shape}")
        names = tuple(self.feature_names)
        row_ids = tuple(tuple(r) if isinstance(r, list) else r for r in self.row_ids)
        if X.shape[1] != len(names):
            raise ValidationError(
                f"{len(names)} feature names for {X.shape[1]} columns"
            )
        if not X.shape[0] == len(y) == len(row_ids):
            raise ValidationError(
                f"row counts differ: X {X.shape[0]}, y {len(y)}, ids {len(row_ids)}"
            )
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValidationError("dataset contains non-finite values")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "row_ids", row_ids)

    @classmethod
    def synthetic(cls, X, y, feature_names=None) -> "Dataset":
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        names = feature_names or tuple(f"f{i}" for i in range(X.shape[1]))
        return cls(tuple(names), X, y, tuple(("syn", "0", str(i)) for i in range(len(X))))

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            self.feature_names, self.X[rows], self.y[rows],
            tuple(self.row_ids[i] for i in rows),
        )

    def with_target(self, y) -> "Dataset":
        return Dataset(self.feature_names, self.X, y, self.row_ids)

    def with_column(self, name: str, values) -> "Dataset":
        values = np.asarray(values, dtype=np.float64).reshape(-1, 1)
        return Dataset(
            self.feature_names + (name,), np.hstack([self.X, values]), self.y, self.row_ids
        )

    def canonical_order(self) -> np.ndarray:
        """Row permutation sorting by row id (stable for duplicates)."""
        keys = [row_sort_key(r) if len(r) == 3 else r for r in self.row_ids]
        return np.array(sorted(range(len(keys)), key=keys.__getitem__), dtype=np.int64)

    def canonical(self) -> "Dataset":
        return self.subset(self.canonical_order())
