"""Drawing-feature extraction: the 38-per-task / 190-per-session battery."""

from .extract import SessionFeatureVector, TaskFeatures, extract_session_features, extract_task_features
from .kinematics import DEFAULT_SMOOTHING_WINDOW, KinematicSeries, differentiate, kinematic_series, smooth
from .registry import (
    FEATURE_NAMES,
    N_SESSION_FEATURES,
    N_TASK_FEATURES,
    SESSION_COLUMNS,
    registry_hash,
)
from .stats import count_local_extrema, cv, cv_across_strokes, cv_within_strokes, pooled_median
from .tables import read_features_csv, read_labels_csv, write_features_csv, write_labels_csv

__all__ = [
    "DEFAULT_SMOOTHING_WINDOW",
    "FEATURE_NAMES",
    "KinematicSeries",
    "N_SESSION_FEATURES",
    "N_TASK_FEATURES",
    "SESSION_COLUMNS",
    "SessionFeatureVector",
    "TaskFeatures",
    "count_local_extrema",
    "cv",
    "cv_across_strokes",
    "cv_within_strokes",
    "differentiate",
    "extract_session_features",
    "extract_task_features",
    "kinematic_series",
    "pooled_median",
    "read_features_csv",
    "read_labels_csv",
    "registry_hash",
    "smooth",
    "write_features_csv",
    "write_labels_csv",
]
