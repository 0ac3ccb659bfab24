"""Bagged regression trees with per-split random feature subsets.

Trees are grown to purity (or ``min_leaf``) with variance-reduction splits.
The split search keeps every feature's sample order pre-sorted and
partitions those orders stably at each split, so a tree costs
O(depth * n_samples * n_features) after the initial sorts.

Tree ``t`` draws its bootstrap sample and split-feature stream from
``seed + t``. Training rows are put in canonical row-id order first, so the
forest does not depend on the order rows arrive in.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..errors import ValidationError
from .base import TrainedModel, register
from .config import ModelConfig
from .dataset import Dataset


@njit(cache=True)
def _grow(X, y, n_candidates, min_leaf, seed):
    np.random.seed(seed)
    m, p = X.shape
    order = np.empty((p, m), np.int64)
    for f in range(p):
        order[f] = np.argsort(X[:, f], kind="mergesort")

    cap = max(2 * m - 1, 1)
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap)
    count = np.zeros(cap, np.int64)

    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_node[0], stack_lo[0], stack_hi[0] = 0, 0, m
    top = 1
    n_nodes = 1

    goes_left = np.zeros(m, np.bool_)
    buf = np.empty(m, np.int64)
    pool = np.arange(p)
    cand = np.empty(n_candidates, np.int64)

    while top > 0:
        top -= 1
        node, lo, hi = stack_node[top], stack_lo[top], stack_hi[top]
        n = hi - lo
        total = 0.0
        y_min = np.inf
        y_max = -np.inf
        for t in range(lo, hi):
            v = y[order[0, t]]
            total += v
            y_min = min(y_min, v)
            y_max = max(y_max, v)
        value[node] = total / n
        count[node] = n
        if n < 2 * min_leaf or y_max == y_min:
            continue

        if n_candidates < p:
            for t in range(n_candidates):
                r = np.random.randint(t, p)
                pool[t], pool[r] = pool[r], pool[t]
            cand[:] = np.sort(pool[:n_candidates])
        else:
            cand[:] = np.arange(p)

        best_score = -np.inf
        best_f = -1
        best_pos = -1
        best_thr = 0.0
        for f in cand:
            run = 0.0
            for t in range(n - 1):
                i = order[f, lo + t]
                run += y[i]
                n_left = t + 1
                n_right = n - n_left
                if n_left < min_leaf:
                    continue
                if n_right < min_leaf:
                    break
                x_here = X[i, f]
                x_next = X[order[f, lo + t + 1], f]
                if not x_here < x_next:
                    continue
                rest = total - run
                score = run * run / n_left + rest * rest / n_right
                if score > best_score:
                    best_score = score
                    best_f = f
                    best_pos = t
                    thr = x_here + (x_next - x_here) / 2.0
                    best_thr = thr if thr < x_next else x_here
        if best_f < 0:
            continue

        for t in range(lo, hi):
            goes_left[order[best_f, t]] = t <= lo + best_pos
        for f in range(p):
            a = lo
            b = 0
            for t in range(lo, hi):
                i = order[f, t]
                if goes_left[i]:
                    order[f, a] = i
                    a += 1
                else:
                    buf[b] = i
                    b += 1
            for t in range(b):
                order[f, a + t] = buf[t]

        mid = lo + best_pos + 1
        feature[node] = best_f
        threshold[node] = best_thr
        left[node] = n_nodes
        right[node] = n_nodes + 1
        stack_node[top], stack_lo[top], stack_hi[top] = n_nodes + 1, mid, hi
        stack_node[top + 1], stack_lo[top + 1], stack_hi[top + 1] = n_nodes, lo, mid
        top += 2
        n_nodes += 2

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), value[:n_nodes].copy(), count[:n_nodes].copy())


@njit(cache=True)
def _apply(feature, threshold, left, right, value, X):
    out = np.empty(X.shape[0])
    for r in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[r, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] = value[node]
    return out


class Tree:
    """A fitted regression tree stored as flat node arrays (feature -1 = leaf)."""

    __slots__ = ("feature", "threshold", "left", "right", "value", "count")

    def __init__(self, feature, threshold, left, right, value, count):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.count = np.asarray(count, dtype=np.int64)

    def __len__(self):
        return len(self.feature)

    def predict(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _apply(self.feature, self.threshold, self.left, self.right, self.value, X)

    def split_counts(self, n_features: int) -> np.ndarray:
        used = self.feature[self.feature >= 0]
        return np.bincount(used, minlength=n_features)

    def to_json(self) -> dict:
        return {k: getattr(self, k).tolist() for k in self.__slots__}

    @classmethod
    def from_json(cls, d: dict) -> "Tree":
        return cls(*(d[k] for k in cls.__slots__))


def n_candidates(n_features: int, feat_fraction: float) -> int:
    return max(1, min(n_features, math.ceil(feat_fraction * n_features - 1e-12)))


def grow_tree(X, y, cfg: ModelConfig, tree_index: int) -> Tree:
    rng = np.random.default_rng(cfg.seed + tree_index)
    n = len(y)
    if cfg.bootstrap:
        rows = rng.integers(0, n, n)
        X, y = X[rows], y[rows]
    split_seed = int(rng.integers(0, 2**32 - 1))
    k = n_candidates(X.shape[1], cfg.feat_fraction)
    return Tree(*_grow(np.ascontiguousarray(X), np.ascontiguousarray(y), k, cfg.min_leaf,
                       split_seed))


def train_rf(data: Dataset, cfg: ModelConfig) -> TrainedModel:
    if cfg.family != "rf":
        raise ValidationError(f"expected an rf config, got {cfg.family!r}")
    if len(data) == 0:
        raise ValidationError("cannot grow a forest on an empty dataset")
    data = data.canonical()
    trees = [grow_tree(data.X, data.y, cfg, t) for t in range(cfg.trees)]
    return TrainedModel(cfg, data.feature_names, {}, {"trees": trees})


def tree_predictions(model: TrainedModel, X) -> np.ndarray:
    """Per-tree predictions, shape (n_trees, n_rows)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    return np.stack([t.predict(X) for t in model.parameters["trees"]])


def _predict(model, X):
    total = np.zeros(X.shape[0])
    for tree in model.parameters["trees"]:
        total += tree.predict(X)
    return total / len(model.parameters["trees"])


def _encode(p):
    return {"trees": [t.to_json() for t in p["trees"]]}


def _decode(d):
    return {"trees": [Tree.from_json(t) for t in d["trees"]]}


register("rf", _predict, _encode, _decode)
