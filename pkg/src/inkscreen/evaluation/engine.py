"""The 10x5 nested cross-validation protocol with in-fold model selection.

Per outer fold, strictly in train-fold scope: fit the preprocessor, run L1
feature selection, tune every family on an inner k-fold grid search, pick
the best family by inner objective (AUC for classification, R^2 for
regression), refit on the full outer-train set, and predict the held-out
fold. Outer-test rows never reach preprocessing, selection, or tuning; the
hooks argument lets tests log the row indices each stage receives. Metrics
are computed per repeat from the pooled out-of-fold predictions and reported
as mean with a 95% CI over repeats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import Empty, ShapeMismatch
from ..learners.elastic_net import fit_elastic_net, l1_select_features
from ..learners.forest import fit_random_forest
from ..learners.preprocess import (
    apply_preprocessor,
    balanced_class_weights,
    fit_preprocessor,
    sample_weights,
)
from ..learners.svm import fit_svm, fit_svm_ovr
from ..util import seed_for
from .folds import stratified_kfold
from .metrics import (
    accuracy,
    ci95,
    confusion_matrix,
    f1_score,
    macro_f1,
    macro_ovr_auc,
    mae,
    r2_score,
    rmse,
    roc_auc,
    sensitivity,
    specificity,
)

CLASSIFICATION = "classification"
REGRESSION = "regression"


@dataclass(frozen=True)
class HyperGrid:
    """Candidate lists inside the search ranges 0.1-1.0 / 0.001-1 (elastic
    net), depth 2-3 and 2-5 features (forest), and linear/rbf kernels with
    C in [1, 200], gamma in [0.0001, 1] (SVM)."""

    en_alpha: tuple = (0.1, 0.325, 0.55, 0.775, 1.0)
    en_c: tuple = (0.001, 0.01, 0.1, 1.0)
    rf_max_depth: tuple = (2, 3)
    rf_max_features: tuple = (2, 3, 4, 5)
    svm_kernels: tuple = ("linear", "rbf")
    svm_c: tuple = (1.0, 10.0, 50.0, 100.0, 200.0)
    svm_gamma: tuple = (1e-4, 1e-3, 1e-2, 1e-1, 1.0)

    def to_dict(self) -> dict:
        return {
            "en_alpha": list(self.en_alpha),
            "en_c": list(self.en_c),
            "rf_max_depth": list(self.rf_max_depth),
            "rf_max_features": list(self.rf_max_features),
            "svm_kernels": list(self.svm_kernels),
            "svm_c": list(self.svm_c),
            "svm_gamma": list(self.svm_gamma),
        }


def default_grid() -> HyperGrid:
    return HyperGrid()


def reduced_grid() -> HyperGrid:
    """Coarser grid for CI-scale runs; every candidate stays in range."""
    return HyperGrid(
        en_alpha=(0.55, 1.0),
        en_c=(0.01, 0.1, 1.0),
        rf_max_depth=(2, 3),
        rf_max_features=(2, 4),
        svm_kernels=("linear", "rbf"),
        svm_c=(1.0, 100.0),
        svm_gamma=(0.01, 0.1),
    )


class _Fitted:
    """Uniform prediction surface over the three families."""

    def __init__(self, model, task: str, kind: str):
        self.model = model
        self.task = task
        self.kind = kind

    @property
    def classes_(self):
        return self.model.classes_

    def class_scores(self, X: np.ndarray) -> np.ndarray:
        if self.kind == "svm":
            if hasattr(self.model, "decision_matrix"):
                return self.model.decision_matrix(X)
            d = self.model.decision_function(X)
            return np.column_stack([-d, d])
        return self.model.predict_proba(X)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.model.predict(X)


class _ElasticNetFamily:
    name = "elastic_net"

    def candidates(self, grid: HyperGrid, task: str) -> list[dict]:
        return [{"alpha": a, "C": c} for a in grid.en_alpha for c in grid.en_c]

    def fit(self, X, y, task, params, seed, n_trees):
        if task == CLASSIFICATION:
            sw = sample_weights(y, balanced_class_weights(y))
            model = fit_elastic_net(X, y, task="logistic", sample_weight=sw, **params)
        else:
            model = fit_elastic_net(X, y, task="linear", **params)
        return _Fitted(model, task, self.name)


class _ForestFamily:
    name = "random_forest"

    def candidates(self, grid: HyperGrid, task: str) -> list[dict]:
        return [
            {"max_depth": d, "max_features": m}
            for d in grid.rf_max_depth
            for m in grid.rf_max_features
        ]

    def fit(self, X, y, task, params, seed, n_trees):
        if task == CLASSIFICATION:
            sw = sample_weights(y, balanced_class_weights(y))
            model = fit_random_forest(
                X, y, task="classification", n_trees=n_trees, seed=seed,
                sample_weight=sw, **params,
            )
        else:
            model = fit_random_forest(
                X, y, task="regression", n_trees=n_trees, seed=seed, **params
            )
        return _Fitted(model, task, self.name)


class _SVMFamily:
    name = "svm"

    def candidates(self, grid: HyperGrid, task: str) -> list[dict]:
        out = []
        for kernel in grid.svm_kernels:
            if kernel == "linear":
                out.extend({"kernel": "linear", "C": c} for c in grid.svm_c)
            else:
                out.extend(
                    {"kernel": "rbf", "C": c, "gamma": g}
                    for c in grid.svm_c
                    for g in grid.svm_gamma
                )
        return out

    def fit(self, X, y, task, params, seed, n_trees):
        if task != CLASSIFICATION:
            raise ShapeMismatch("the SVM family is classification-only")
        sw = sample_weights(y, balanced_class_weights(y))
        if np.unique(y).shape[0] == 2:
            model = fit_svm(X, y, sample_weight=sw, **params)
        else:
            model = fit_svm_ovr(X, y, sample_weight=sw, **params)
        return _Fitted(model, task, self.name)


FAMILIES = {
    "elastic_net": _ElasticNetFamily(),
    "random_forest": _ForestFamily(),
    "svm": _SVMFamily(),
}


def default_families(task: str) -> tuple[str, ...]:
    if task == REGRESSION:
        # the SVM surface here is the classification dual; see design notes
        return ("elastic_net", "random_forest")
    return ("elastic_net", "random_forest", "svm")


@dataclass
class CVHooks:
    """Instrumentation: called with (stage, repeat, fold, train_row_indices)."""

    on_stage: Callable[[str, int, int, np.ndarray], None]


def _objective(task, y_true, scores, classes) -> float:
    if task == CLASSIFICATION:
        if len(classes) == 2:
            return roc_auc(y_true, scores[:, 1], pos_label=classes[1])
        return macro_ovr_auc(y_true, scores, classes)
    return r2_score(y_true, scores)


def inner_grid_search(
    X: np.ndarray,
    y: np.ndarray,
    task: str,
    family_name: str,
    grid: HyperGrid,
    inner_k: int,
    seed: int,
    n_trees: int = 100,
) -> tuple[dict, float]:
    """Mean inner-fold objective per grid point; ties keep the earlier point."""
    family = FAMILIES[family_name]
    candidates = family.candidates(grid, task)
    folds = stratified_kfold(y, inner_k, seed_for(seed, "inner_folds"), task)
    classes = np.unique(y) if task == CLASSIFICATION else None
    best_params: dict | None = None
    best_score = -np.inf
    for ci, params in enumerate(candidates):
        fold_scores = []
        for f in range(inner_k):
            tr = folds != f
            va = folds == f
            fitted = family.fit(
                X[tr], y[tr], task, params, seed_for(seed, "cand", ci, "fold", f), n_trees
            )
            if task == CLASSIFICATION:
                scores = fitted.class_scores(X[va])
                fold_scores.append(_objective(task, y[va], scores, classes))
            else:
                try:
                    fold_scores.append(_objective(task, y[va], fitted.predict(X[va]), None))
                except Empty:
                    pass  # constant validation targets leave R^2 undefined
        score = float(np.mean(fold_scores)) if fold_scores else -np.inf
        if score > best_score:
            best_score = score
            best_params = params
    if best_params is None:
        best_params = candidates[0]
    return best_params, best_score


@dataclass
class CVResult:
    task: str
    n_samples: int
    repeats: int
    outer_k: int
    inner_k: int
    seed: int
    headline_metric: str
    classes: list | None
    per_repeat: dict[str, np.ndarray]
    summary: dict[str, dict]
    confusion: np.ndarray | None
    fold_choices: list[dict]
    grid: HyperGrid = field(default_factory=default_grid)
    families: tuple[str, ...] = ()

    @property
    def headline(self) -> float:
        return self.summary[self.headline_metric]["mean"]

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "task": self.task,
            "n_samples": self.n_samples,
            "protocol": {
                "repeats": self.repeats,
                "outer_k": self.outer_k,
                "inner_k": self.inner_k,
                "seed": self.seed,
            },
            "headline_metric": self.headline_metric,
            "classes": self.classes,
            "metrics": {
                name: {
                    "mean": self.summary[name]["mean"],
                    "ci95": [self.summary[name]["ci_low"], self.summary[name]["ci_high"]],
                    "per_repeat": self.per_repeat[name].tolist(),
                }
                for name in self.per_repeat
            },
            "confusion_matrix": None
            if self.confusion is None
            else {"labels": self.classes, "counts": self.confusion.tolist()},
            "fold_choices": self.fold_choices,
            "grid": self.grid.to_dict(),
            "families": list(self.families),
        }


def nested_cv(
    X: np.ndarray,
    y: np.ndarray,
    task: str,
    families: tuple[str, ...] | None = None,
    grid: HyperGrid | None = None,
    repeats: int = 10,
    outer_k: int = 5,
    inner_k: int = 5,
    seed: int = 0,
    selection_c: float = 0.1,
    selector_flavor: str | None = None,
    n_trees: int = 100,
    hooks: CVHooks | None = None,
) -> CVResult:
    """Run the full nested cross-validation protocol on a feature matrix.

    X may contain NaN (imputed inside training folds). For classification,
    labels must sort in order of increasing impairment; the largest label is
    the designated positive class of binary metrics.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeMismatch(f"X shape {X.shape} does not match y shape {y.shape}")
    if X.shape[0] == 0:
        raise Empty("empty dataset")
    if task not in (CLASSIFICATION, REGRESSION):
        raise ShapeMismatch(f"unknown task {task!r}")
    families = tuple(families) if families else default_families(task)
    grid = grid or default_grid()
    if selector_flavor is None:
        selector_flavor = "logistic" if task == CLASSIFICATION else "linear"

    n = X.shape[0]
    classes = np.unique(y) if task == CLASSIFICATION else None
    is_binary = task == CLASSIFICATION and classes.shape[0] == 2

    per_repeat: dict[str, list[float]] = {}
    confusion = None
    fold_choices: list[dict] = []

    for rep in range(repeats):
        folds = stratified_kfold(y, outer_k, seed_for(seed, "outer", rep), task)
        if task == CLASSIFICATION:
            oof_pred = np.empty(n, dtype=y.dtype)
            oof_scores = np.empty((n, classes.shape[0]))
        else:
            oof_pred = np.empty(n)

        for f in range(outer_k):
            tr_idx = np.flatnonzero(folds != f)
            te_idx = np.flatnonzero(folds == f)
            Xtr_raw, ytr = X[tr_idx], y[tr_idx]

            if hooks is not None:
                hooks.on_stage("fit_preprocessor", rep, f, tr_idx)
            pp = fit_preprocessor(Xtr_raw)
            Xtr = apply_preprocessor(pp, Xtr_raw)
            Xte = apply_preprocessor(pp, X[te_idx])

            if hooks is not None:
                hooks.on_stage("l1_select_features", rep, f, tr_idx)
            if task == CLASSIFICATION and selector_flavor == "logistic":
                sel_weights = sample_weights(ytr, balanced_class_weights(ytr))
            else:
                sel_weights = None
            selected = l1_select_features(
                Xtr, ytr, selection_c=selection_c, flavor=selector_flavor,
                sample_weight=sel_weights,
            )
            Xtr_s, Xte_s = Xtr[:, selected], Xte[:, selected]

            if hooks is not None:
                hooks.on_stage("inner_grid_search", rep, f, tr_idx)
            best = None
            for fam_name in families:
                params, score = inner_grid_search(
                    Xtr_s, ytr, task, fam_name, grid, inner_k,
                    seed_for(seed, "inner", rep, f, fam_name), n_trees,
                )
                if best is None or score > best[2]:
                    best = (fam_name, params, score)
            fam_name, params, inner_score = best
            fitted = FAMILIES[fam_name].fit(
                Xtr_s, ytr, task, params, seed_for(seed, "refit", rep, f), n_trees
            )
            fold_choices.append({
                "repeat": rep, "fold": f, "family": fam_name,
                "params": params, "inner_score": inner_score,
                "n_selected": int(selected.shape[0]),
            })

            if task == CLASSIFICATION:
                oof_pred[te_idx] = fitted.predict(Xte_s)
                oof_scores[te_idx] = fitted.class_scores(Xte_s)
            else:
                oof_pred[te_idx] = fitted.predict(Xte_s)

        if task == CLASSIFICATION:
            rep_metrics = {"accuracy": accuracy(y, oof_pred)}
            rep_metrics["auc"] = _objective(task, y, oof_scores, classes)
            if is_binary:
                pos = classes[1]
                rep_metrics["sensitivity"] = sensitivity(y, oof_pred, pos)
                rep_metrics["specificity"] = specificity(y, oof_pred, pos)
                rep_metrics["f1"] = f1_score(y, oof_pred, pos)
            else:
                rep_metrics["f1_macro"] = macro_f1(y, oof_pred, classes)
            cm = confusion_matrix(y, oof_pred, classes)
            confusion = cm if confusion is None else confusion + cm
        else:
            rep_metrics = {
                "r2": r2_score(y, oof_pred),
                "mae": mae(y, oof_pred),
                "rmse": rmse(y, oof_pred),
            }
        for name, value in rep_metrics.items():
            per_repeat.setdefault(name, []).append(value)

    per_repeat_arr = {k: np.array(v) for k, v in per_repeat.items()}
    summary = {}
    for name, vals in per_repeat_arr.items():
        if vals.size >= 2:
            lo, hi = ci95(vals)
        else:
            lo = hi = float(vals.mean())
        summary[name] = {"mean": float(vals.mean()), "ci_low": lo, "ci_high": hi}

    return CVResult(
        task=task, n_samples=n, repeats=repeats, outer_k=outer_k, inner_k=inner_k,
        seed=seed, headline_metric="auc" if task == CLASSIFICATION else "r2",
        classes=None if classes is None else classes.tolist(),
        per_repeat=per_repeat_arr, summary=summary, confusion=confusion,
        fold_choices=fold_choices, grid=grid, families=families,
    )
