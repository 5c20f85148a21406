"""Fixed registry of the 38 per-task features and 190 session columns.

Order is a contract: the kinematic family (speed, acceleration, jerk blocks),
then pressure, then posture, then pauses. Session columns are task-major in
the task order SENTENCE, PENTAGON, TMT_A, TMT_B, CDT, named "TASK.feature".
"""

from __future__ import annotations

import hashlib

from ..strokes import TASKS

_STAT_SUFFIXES = ("median", "cv_across", "cv_within", "extrema_per_length", "extrema_per_time")

KINEMATIC_FEATURES = tuple(
    f"{channel}_{suffix}"
    for channel in ("speed", "accel", "jerk")
    for suffix in _STAT_SUFFIXES
)

PRESSURE_FEATURES = (
    "pressure_median",
    "pressure_cv_across",
    "pressure_cv_within",
    "pressure_extrema_per_length",
    "pressure_extrema_per_time",
    "pressure_rate_median",
    "pressure_rate_cv_across",
    "pressure_rate_cv_within",
)

POSTURE_FEATURES = tuple(
    f"tilt_{axis}_{suffix}"
    for axis in ("x", "y")
    for suffix in ("sd_across", "sd_within", "rate_abs_median", "rate_cv_across", "rate_cv_within")
)

PAUSE_FEATURES = (
    "pause_mean",
    "pause_cv",
    "n_drawings",
    "pause_drawing_ratio",
    "adjusted_total_duration",
)

FEATURE_NAMES: tuple[str, ...] = (
    KINEMATIC_FEATURES + PRESSURE_FEATURES + POSTURE_FEATURES + PAUSE_FEATURES
)

FAMILY_SIZES = {
    "kinematic": len(KINEMATIC_FEATURES),
    "pressure": len(PRESSURE_FEATURES),
    "posture": len(POSTURE_FEATURES),
    "pause": len(PAUSE_FEATURES),
}

N_TASK_FEATURES = len(FEATURE_NAMES)
assert N_TASK_FEATURES == 38

SESSION_COLUMNS: tuple[str, ...] = tuple(
    f"{task}.{name}" for task in TASKS for name in FEATURE_NAMES
)
N_SESSION_FEATURES = len(SESSION_COLUMNS)
assert N_SESSION_FEATURES == 190

FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}
COLUMN_INDEX = {name: i for i, name in enumerate(SESSION_COLUMNS)}


def registry_hash() -> str:
    """Hash of the full column registry; bundles refuse to load across changes."""
    return hashlib.sha256("\n".join(SESSION_COLUMNS).encode("utf-8")).hexdigest()
