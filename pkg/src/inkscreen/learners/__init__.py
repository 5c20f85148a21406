"""From-scratch model families and in-pipeline preprocessing."""

from .elastic_net import ElasticNetGLM, fit_elastic_net, l1_select_features
from .forest import RandomForestModel, fit_random_forest
from .preprocess import (
    Preprocessor,
    apply_preprocessor,
    balanced_class_weights,
    fit_preprocessor,
    sample_weights,
)
from .svm import SVMModel, SVMOvR, fit_svm, fit_svm_ovr, kernel_matrix

__all__ = [
    "ElasticNetGLM",
    "Preprocessor",
    "RandomForestModel",
    "SVMModel",
    "SVMOvR",
    "apply_preprocessor",
    "balanced_class_weights",
    "fit_elastic_net",
    "fit_preprocessor",
    "fit_random_forest",
    "fit_svm",
    "fit_svm_ovr",
    "kernel_matrix",
    "l1_select_features",
    "sample_weights",
]
