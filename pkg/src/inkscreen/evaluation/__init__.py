"""Nested cross-validation, metrics, and permutation testing."""

from .engine import (
    CVHooks,
    CVResult,
    HyperGrid,
    default_families,
    default_grid,
    inner_grid_search,
    nested_cv,
    reduced_grid,
)
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
from .permutation import PermutationResult, permutation_pvalue, permutation_test

__all__ = [
    "CVHooks",
    "CVResult",
    "HyperGrid",
    "PermutationResult",
    "accuracy",
    "ci95",
    "confusion_matrix",
    "default_families",
    "default_grid",
    "f1_score",
    "inner_grid_search",
    "macro_f1",
    "macro_ovr_auc",
    "mae",
    "nested_cv",
    "permutation_pvalue",
    "permutation_test",
    "r2_score",
    "reduced_grid",
    "rmse",
    "roc_auc",
    "sensitivity",
    "specificity",
    "stratified_kfold",
]
