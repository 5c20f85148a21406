"""Random forest on bootstrap samples with weighted Gini / variance splits.

Each tree draws a seeded bootstrap, and every node scans max_features
uniformly sampled candidate features for the threshold minimizing the
weighted child impurity (Gini for classification, variance for regression).
Thresholds are midpoints between consecutive distinct values. Leaves store
weighted class frequencies or weighted means; prediction averages over
trees. Everything is deterministic given (data, hyperparameters, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._accel import NUMBA_ENABLED, njit
from ..errors import BadDepth, BadMaxFeatures, NonFinite, ShapeMismatch
from ..util import rng_for

DEFAULT_N_TREES = 100


@njit(cache=True)
def _best_split_cls(Xc, yi, w, n_classes):
    n, m = Xc.shape
    tw = np.zeros(n_classes)
    total = 0.0
    for i in range(n):
        tw[yi[i]] += w[i]
        total += w[i]
    best_score = np.inf
    best_j = -1
    best_thr = 0.0
    col = np.empty(n)
    for j in range(m):
        for i in range(n):
            col[i] = Xc[i, j]
        order = np.argsort(col)
        lw = np.zeros(n_classes)
        lsum = 0.0
        for r in range(n - 1):
            i = order[r]
            lw[yi[i]] += w[i]
            lsum += w[i]
            xc = col[order[r]]
            xn = col[order[r + 1]]
            if xn <= xc:
                continue
            rsum = total - lsum
            if lsum <= 0.0 or rsum <= 0.0:
                continue
            gl = 1.0
            gr = 1.0
            for c in range(n_classes):
                fl = lw[c] / lsum
                fr = (tw[c] - lw[c]) / rsum
                gl -= fl * fl
                gr -= fr * fr
            score = (lsum * gl + rsum * gr) / total
            if score < best_score:
                best_score = score
                best_j = j
                best_thr = xc + 0.5 * (xn - xc)
    return best_j, best_thr


@njit(cache=True)
def _best_split_reg(Xc, yv, w):
    n, m = Xc.shape
    s1 = 0.0
    s2 = 0.0
    total = 0.0
    for i in range(n):
        s1 += w[i] * yv[i]
        s2 += w[i] * yv[i] * yv[i]
        total += w[i]
    best_score = np.inf
    best_j = -1
    best_thr = 0.0
    col = np.empty(n)
    for j in range(m):
        for i in range(n):
            col[i] = Xc[i, j]
        order = np.argsort(col)
        l1 = 0.0
        l2 = 0.0
        lsum = 0.0
        for r in range(n - 1):
            i = order[r]
            l1 += w[i] * yv[i]
            l2 += w[i] * yv[i] * yv[i]
            lsum += w[i]
            xc = col[order[r]]
            xn = col[order[r + 1]]
            if xn <= xc:
                continue
            rsum = total - lsum
            if lsum <= 0.0 or rsum <= 0.0:
                continue
            impl = l2 - l1 * l1 / lsum
            impr = (s2 - l2) - (s1 - l1) * (s1 - l1) / rsum
            score = (impl + impr) / total
            if score < best_score:
                best_score = score
                best_j = j
                best_thr = xc + 0.5 * (xn - xc)
    return best_j, best_thr


def _best_split_cls_numpy(Xc, yi, w, n_classes):
    n = Xc.shape[0]
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), yi] = 1.0
    wh = onehot * w[:, None]
    tw = wh.sum(axis=0)
    total = float(w.sum())
    best = (np.inf, -1, 0.0)
    for j in range(Xc.shape[1]):
        col = Xc[:, j]
        order = np.argsort(col, kind="stable")
        cs = np.cumsum(wh[order], axis=0)
        lsum = cs.sum(axis=1)
        xs = col[order]
        valid = (xs[1:] > xs[:-1]) & (lsum[:-1] > 0) & (total - lsum[:-1] > 0)
        if not valid.any():
            continue
        lw = cs[:-1][valid]
        ls = lsum[:-1][valid]
        rs = total - ls
        gl = 1.0 - ((lw / ls[:, None]) ** 2).sum(axis=1)
        gr = 1.0 - (((tw - lw) / rs[:, None]) ** 2).sum(axis=1)
        score = (ls * gl + rs * gr) / total
        k = int(np.argmin(score))
        if score[k] < best[0]:
            idx = np.flatnonzero(valid)[k]
            thr = xs[idx] + 0.5 * (xs[idx + 1] - xs[idx])
            best = (float(score[k]), j, float(thr))
    return best[1], best[2]


def _best_split_reg_numpy(Xc, yv, w):
    total = float(w.sum())
    s1 = float((w * yv).sum())
    s2 = float((w * yv * yv).sum())
    best = (np.inf, -1, 0.0)
    for j in range(Xc.shape[1]):
        col = Xc[:, j]
        order = np.argsort(col, kind="stable")
        cw = np.cumsum(w[order])
        c1 = np.cumsum((w * yv)[order])
        c2 = np.cumsum((w * yv * yv)[order])
        xs = col[order]
        valid = (xs[1:] > xs[:-1]) & (cw[:-1] > 0) & (total - cw[:-1] > 0)
        if not valid.any():
            continue
        ls, l1, l2 = cw[:-1][valid], c1[:-1][valid], c2[:-1][valid]
        rs = total - ls
        score = ((l2 - l1 * l1 / ls) + ((s2 - l2) - (s1 - l1) ** 2 / rs)) / total
        k = int(np.argmin(score))
        if score[k] < best[0]:
            idx = np.flatnonzero(valid)[k]
            thr = xs[idx] + 0.5 * (xs[idx + 1] - xs[idx])
            best = (float(score[k]), j, float(thr))
    return best[1], best[2]


@dataclass
class _Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def depth(self) -> int:
        def walk(node: int) -> int:
            if self.feature[node] < 0:
                return 0
            return 1 + max(walk(int(self.left[node])), walk(int(self.right[node])))

        return walk(0)

    def apply(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            at_split = self.feature[node] >= 0
            if not at_split.any():
                return self.value[node]
            idx = np.flatnonzero(at_split)
            feats = self.feature[node[idx]]
            goes_left = X[idx, feats] <= self.threshold[node[idx]]
            node[idx] = np.where(goes_left, self.left[node[idx]], self.right[node[idx]])


class _TreeBuilder:
    def __init__(self, X, y_enc, weights, task, n_classes, max_depth, max_features, rng):
        self.X = X
        self.y = y_enc
        self.w = weights
        self.task = task
        self.n_classes = n_classes
        self.max_depth = max_depth
        self.max_features = min(max_features, X.shape[1])
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[np.ndarray] = []

    def _leaf_value(self, rows) -> np.ndarray:
        w = self.w[rows]
        if self.task == "classification":
            dist = np.zeros(self.n_classes)
            np.add.at(dist, self.y[rows], w)
            return dist / dist.sum()
        return np.array([float((w * self.y[rows]).sum() / w.sum())])

    def _make_leaf(self, rows) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(self._leaf_value(rows))
        return node

    def build(self, rows: np.ndarray, depth: int) -> int:
        y = self.y[rows]
        pure = bool(np.all(y == y[0]))
        if depth >= self.max_depth or rows.shape[0] < 2 or pure:
            return self._make_leaf(rows)
        feats = np.sort(self.rng.choice(self.X.shape[1], size=self.max_features, replace=False))
        Xc = np.ascontiguousarray(self.X[np.ix_(rows, feats)])
        w = np.ascontiguousarray(self.w[rows])
        if self.task == "classification":
            split = _best_split_cls if NUMBA_ENABLED else _best_split_cls_numpy
            j, thr = split(Xc, np.ascontiguousarray(y), w, self.n_classes)
        else:
            split = _best_split_reg if NUMBA_ENABLED else _best_split_reg_numpy
            j, thr = split(Xc, np.ascontiguousarray(y.astype(np.float64)), w)
        if j < 0:
            return self._make_leaf(rows)
        feat = int(feats[j])
        mask = self.X[rows, feat] <= thr
        node = len(self.feature)
        self.feature.append(feat)
        self.threshold.append(float(thr))
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(self._leaf_value(rows))
        left = self.build(rows[mask], depth + 1)
        right = self.build(rows[~mask], depth + 1)
        self.left[node] = left
        self.right[node] = right
        return node

    def finish(self) -> _Tree:
        width = self.n_classes if self.task == "classification" else 1
        return _Tree(
            feature=np.array(self.feature, dtype=np.int64),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int64),
            right=np.array(self.right, dtype=np.int64),
            value=np.vstack(self.value).reshape(-1, width),
        )


@dataclass
class RandomForestModel:
    task: str
    n_trees: int
    max_depth: int
    max_features: int
    seed: int
    trees: list[_Tree]
    classes_: np.ndarray | None = None

    @property
    def n_features(self) -> int:
        return int(max((t.feature.max() for t in self.trees), default=-1)) + 1

    def _scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        acc = self.trees[0].apply(X).copy()
        for tree in self.trees[1:]:
            acc += tree.apply(X)
        return acc / len(self.trees)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.task != "classification":
            raise ShapeMismatch("predict_proba is only defined for classification")
        return self._scores(X)

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = self._scores(X)
        if self.task == "classification":
            return self.classes_[np.argmax(scores, axis=1)]
        return scores[:, 0]

    def to_state(self) -> dict:
        return {
            "task": self.task,
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "max_features": self.max_features,
            "seed": self.seed,
            "classes": None if self.classes_ is None else self.classes_.tolist(),
            "trees": [
                {
                    "feature": t.feature.tolist(),
                    "threshold": t.threshold.tolist(),
                    "left": t.left.tolist(),
                    "right": t.right.tolist(),
                    "value": t.value.tolist(),
                }
                for t in self.trees
            ],
        }

    @classmethod
    def from_state(cls, state: dict) -> "RandomForestModel":
        trees = [
            _Tree(
                feature=np.asarray(t["feature"], dtype=np.int64),
                threshold=np.asarray(t["threshold"], dtype=np.float64),
                left=np.asarray(t["left"], dtype=np.int64),
                right=np.asarray(t["right"], dtype=np.int64),
                value=np.asarray(t["value"], dtype=np.float64),
            )
            for t in state["trees"]
        ]
        return cls(
            task=state["task"],
            n_trees=state["n_trees"],
            max_depth=state["max_depth"],
            max_features=state["max_features"],
            seed=state["seed"],
            trees=trees,
            classes_=None if state["classes"] is None else np.asarray(state["classes"]),
        )


def fit_random_forest(
    X: np.ndarray,
    y: np.ndarray,
    task: str = "classification",
    max_depth: int = 3,
    max_features: int = 3,
    n_trees: int = DEFAULT_N_TREES,
    seed: int = 0,
    sample_weight: np.ndarray | None = None,
) -> RandomForestModel:
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or y.shape[0] != X.shape[0]:
        raise ShapeMismatch(f"X shape {X.shape} does not match y shape {y.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFinite("training data contains non-finite values")
    if not isinstance(max_depth, (int, np.integer)) or max_depth < 1:
        raise BadDepth(f"max_depth must be a positive integer, got {max_depth}")
    if not isinstance(max_features, (int, np.integer)) or max_features < 1:
        raise BadMaxFeatures(f"max_features must be >= 1, got {max_features}")
    n = X.shape[0]
    base_w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)

    if task == "classification":
        classes = np.unique(y)
        y_enc = np.searchsorted(classes, y).astype(np.int64)
        n_classes = int(classes.shape[0])
    else:
        classes = None
        y_enc = y.astype(np.float64)
        n_classes = 0

    trees: list[_Tree] = []
    for t in range(n_trees):
        rng = rng_for(seed, "tree", t)
        idx = rng.integers(0, n, size=n)
        counts = np.bincount(idx, minlength=n).astype(np.float64)
        w = counts * base_w
        rows = np.flatnonzero(w > 0)
        builder = _TreeBuilder(X, y_enc, w, task, n_classes, max_depth, max_features, rng)
        builder.build(rows, 0)
        trees.append(builder.finish())

    return RandomForestModel(
        task=task, n_trees=n_trees, max_depth=max_depth, max_features=max_features,
        seed=seed, trees=trees, classes_=classes,
    )
