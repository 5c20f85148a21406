"""Persisted pipeline state: preprocessor, per-target selection and models.

The bundle is versioned JSON with full-precision floats (repr round-trip),
so reloaded models reproduce predictions exactly. It carries one shared
imputer/standardizer plus, for each of the three screening targets
(3-class diagnosis, MMSE regression, MTL-atrophy regression), the selected
feature indices and the winning family's fitted parameters. Loading checks
the format version and the feature-registry hash.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BundleVersionMismatch, RegistryHashMismatch, ShapeMismatch
from .evaluation.engine import FAMILIES, HyperGrid, default_grid, inner_grid_search
from .features.registry import N_SESSION_FEATURES, registry_hash
from .learners.elastic_net import ElasticNetGLM, l1_select_features
from .learners.forest import RandomForestModel
from .learners.preprocess import (
    Preprocessor,
    apply_preprocessor,
    balanced_class_weights,
    fit_preprocessor,
    sample_weights,
)
from .learners.svm import SVMModel, SVMOvR
from .strokes import DIAGNOSES
from .util import seed_for

BUNDLE_VERSION = 1
TARGETS = ("diagnosis", "mmse", "mtl")

_MODEL_CODECS = {
    "elastic_net": ElasticNetGLM,
    "random_forest": RandomForestModel,
    "svm": SVMModel,
    "svm_ovr": SVMOvR,
}


def _model_kind(model) -> str:
    if isinstance(model, ElasticNetGLM):
        return "elastic_net"
    if isinstance(model, RandomForestModel):
        return "random_forest"
    if isinstance(model, SVMOvR):
        return "svm_ovr"
    if isinstance(model, SVMModel):
        return "svm"
    raise ShapeMismatch(f"unknown model type {type(model)!r}")


@dataclass
class TargetPipeline:
    target: str
    task: str  # classification | regression
    family: str
    params: dict
    selected: np.ndarray
    model: object

    def to_state(self) -> dict:
        return {
            "target": self.target,
            "task": self.task,
            "family": self.family,
            "params": self.params,
            "selected": self.selected.tolist(),
            "model_kind": _model_kind(self.model),
            "model": self.model.to_state(),
        }

    @classmethod
    def from_state(cls, state: dict) -> "TargetPipeline":
        codec = _MODEL_CODECS[state["model_kind"]]
        return cls(
            target=state["target"],
            task=state["task"],
            family=state["family"],
            params=state["params"],
            selected=np.asarray(state["selected"], dtype=np.int64),
            model=codec.from_state(state["model"]),
        )


@dataclass
class TrainedBundle:
    version: int
    registry: str
    preprocessor: Preprocessor
    targets: dict[str, TargetPipeline]
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format_version": self.version,
            "registry_hash": self.registry,
            "preprocessor": self.preprocessor.to_state(),
            "targets": {name: tp.to_state() for name, tp in self.targets.items()},
            "metadata": self.metadata,
        }


def dataset_fingerprint(ids: list[str], X: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update("\n".join(ids).encode("utf-8"))
    h.update(np.ascontiguousarray(X, dtype=np.float64).tobytes())
    return h.hexdigest()[:16]


def train_bundle(
    X: np.ndarray,
    targets: dict[str, np.ndarray],
    seed: int = 0,
    grid: HyperGrid | None = None,
    families: dict[str, tuple[str, ...]] | None = None,
    selection_c: float = 0.1,
    inner_k: int = 5,
    n_trees: int = 100,
    metadata: dict | None = None,
) -> TrainedBundle:
    """Fit the deployable pipeline on a full dataset.

    `targets` maps target name to a label vector aligned with X rows; NaN
    (or None for diagnosis) marks rows without that label. Model selection
    is a k-fold grid search on all labeled rows, then a refit.
    """
    X = np.asarray(X, dtype=np.float64)
    grid = grid or default_grid()
    pp = fit_preprocessor(X)
    pipelines: dict[str, TargetPipeline] = {}
    for name in TARGETS:
        if name not in targets:
            continue
        y = targets[name]
        task = "classification" if name == "diagnosis" else "regression"
        if task == "classification":
            mask = np.array([v is not None for v in y])
            y_use = np.array([DIAGNOSES.index(v) for v, m in zip(y, mask) if m], dtype=np.int64)
        else:
            y = np.asarray(y, dtype=np.float64)
            mask = ~np.isnan(y)
            y_use = y[mask]
        if int(mask.sum()) < 2 * inner_k:
            continue
        Xt = apply_preprocessor(pp, X[mask])
        flavor = "logistic" if task == "classification" else "linear"
        sel_w = (
            sample_weights(y_use, balanced_class_weights(y_use))
            if task == "classification"
            else None
        )
        selected = l1_select_features(
            Xt, y_use, selection_c=selection_c, flavor=flavor, sample_weight=sel_w
        )
        Xs = Xt[:, selected]
        fam_names = (families or {}).get(name) or (
            ("elastic_net", "random_forest", "svm")
            if task == "classification"
            else ("elastic_net", "random_forest")
        )
        best = None
        for fam in fam_names:
            params, score = inner_grid_search(
                Xs, y_use, task, fam, grid, inner_k,
                seed_for(seed, "bundle", name, fam), n_trees,
            )
            if best is None or score > best[2]:
                best = (fam, params, score)
        fam, params, _ = best
        fitted = FAMILIES[fam].fit(Xs, y_use, task, params, seed_for(seed, "bundle_fit", name), n_trees)
        pipelines[name] = TargetPipeline(
            target=name, task=task, family=fam, params=params,
            selected=selected, model=fitted.model,
        )

    meta = {"seed": seed, "timestamp": _timestamp(), "n_rows": int(X.shape[0])}
    meta.update(metadata or {})
    return TrainedBundle(
        version=BUNDLE_VERSION, registry=registry_hash(),
        preprocessor=pp, targets=pipelines, metadata=meta,
    )


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else time.time()
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def save_bundle(bundle: TrainedBundle, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle.to_dict(), fh)


def load_bundle(path: str | Path) -> TrainedBundle:
    with open(path, encoding="utf-8") as fh:
        state = json.load(fh)
    if state.get("format_version") != BUNDLE_VERSION:
        raise BundleVersionMismatch(
            f"bundle version {state.get('format_version')!r}, expected {BUNDLE_VERSION}"
        )
    if state.get("registry_hash") != registry_hash():
        raise RegistryHashMismatch("bundle was built against a different feature registry")
    return TrainedBundle(
        version=state["format_version"],
        registry=state["registry_hash"],
        preprocessor=Preprocessor.from_state(state["preprocessor"]),
        targets={
            name: TargetPipeline.from_state(tp) for name, tp in state["targets"].items()
        },
        metadata=state.get("metadata", {}),
    )


def bundle_predict(bundle: TrainedBundle, X: np.ndarray) -> dict:
    """Predictions for feature rows (NaN allowed): class probabilities over
    CN/MCI/DEMENTIA, MMSE clamped to [0, 30], and MTL-atrophy Z-score."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != N_SESSION_FEATURES:
        raise ShapeMismatch(f"expected {N_SESSION_FEATURES} features, got {X.shape[1]}")
    Xt = apply_preprocessor(bundle.preprocessor, X)
    n = X.shape[0]
    out: dict = {"probabilities": None, "mmse": None, "mtl": None}

    tp = bundle.targets.get("diagnosis")
    if tp is not None:
        Xs = Xt[:, tp.selected]
        if isinstance(tp.model, (SVMOvR, SVMModel)):
            if isinstance(tp.model, SVMModel):
                d = tp.model.decision_function(Xs)
                scores = np.column_stack([-d, d])
            else:
                scores = tp.model.decision_matrix(Xs)
            # display-only calibration: softmax over OvR decision values
            e = np.exp(scores - scores.max(axis=1, keepdims=True))
            probs = e / e.sum(axis=1, keepdims=True)
            classes = tp.model.classes_
        else:
            probs = tp.model.predict_proba(Xs)
            classes = tp.model.classes_
        full = np.zeros((n, len(DIAGNOSES)))
        for k, cls in enumerate(np.asarray(classes).tolist()):
            full[:, int(cls)] = probs[:, k]
        full /= full.sum(axis=1, keepdims=True)
        out["probabilities"] = full

    tp = bundle.targets.get("mmse")
    if tp is not None:
        out["mmse"] = np.clip(tp.model.predict(Xt[:, tp.selected]), 0.0, 30.0)

    tp = bundle.targets.get("mtl")
    if tp is not None:
        out["mtl"] = tp.model.predict(Xt[:, tp.selected])
    return out
