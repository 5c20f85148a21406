"""In-pipeline preprocessing: median imputation, z-scoring, class weights.

All statistics are fit on training rows only and applied unchanged to unseen
rows; imputation happens inside training folds, never at extraction time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyLabels, NoRows


@dataclass(frozen=True)
class Preprocessor:
    medians: np.ndarray
    means: np.ndarray
    sds: np.ndarray

    @property
    def n_features(self) -> int:
        return int(self.medians.shape[0])

    def to_state(self) -> dict:
        return {
            "medians": self.medians.tolist(),
            "means": self.means.tolist(),
            "sds": self.sds.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict) -> "Preprocessor":
        return cls(
            medians=np.asarray(state["medians"], dtype=np.float64),
            means=np.asarray(state["means"], dtype=np.float64),
            sds=np.asarray(state["sds"], dtype=np.float64),
        )


def fit_preprocessor(X: np.ndarray) -> Preprocessor:
    """Fit imputation medians and standardization moments on training rows.

    Missing entries are NaN. Medians are per-column over observed values
    (0 for all-missing columns); means/SDs are of the imputed matrix.
    Constant columns get an SD guard of 1 so they transform to zeros.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise NoRows(f"need at least 2 training rows, got shape {X.shape}")
    with np.errstate(all="ignore"):
        medians = np.nanmedian(X, axis=0)
    medians = np.where(np.isnan(medians), 0.0, medians)
    Xi = np.where(np.isnan(X), medians, X)
    means = Xi.mean(axis=0)
    sds = Xi.std(axis=0, ddof=0)
    guard = sds <= 1e-12 * (1.0 + np.abs(means))
    sds = np.where(guard, 1.0, sds)
    return Preprocessor(medians=medians, means=means, sds=sds)


def apply_preprocessor(pp: Preprocessor, X: np.ndarray) -> np.ndarray:
    """Impute with stored medians, then z-score with stored moments."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != pp.n_features:
        raise NoRows(f"feature count {X.shape[1]} != fitted {pp.n_features}")
    Xi = np.where(np.isnan(X), pp.medians, X)
    return (Xi - pp.means) / pp.sds


def balanced_class_weights(y: np.ndarray) -> dict:
    """w_c = N / (K * N_c): the 'balanced' class-weight mode."""
    y = np.asarray(y)
    if y.size == 0:
        raise EmptyLabels("no labels supplied")
    classes, counts = np.unique(y, return_counts=True)
    n, k = y.size, classes.size
    return {cls: n / (k * cnt) for cls, cnt in zip(classes.tolist(), counts.tolist())}


def sample_weights(y: np.ndarray, class_weights: dict | None) -> np.ndarray:
    """Expand class weights to per-sample weights (ones when None)."""
    y = np.asarray(y)
    if class_weights is None:
        return np.ones(y.shape[0])
    return np.array([class_weights[v] for v in y.tolist()], dtype=np.float64)
