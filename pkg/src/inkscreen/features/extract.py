"""Assembly of the 38 per-task features and the 190-entry session vector.

Family conventions (mirrored by the independent oracle in the tests):

* kinematic, pressure, and posture families are computed over
  derivative-eligible strokes only; the pause family and the normalization
  totals (path length, drawing duration) use every stroke;
* across-stroke statistics summarize each stroke by its mean; within-stroke
  CVs/SDs are averaged unweighted;
* extrema counts are pooled over eligible strokes, then divided by the
  task's total path length (per-mm) or total drawing duration (per-second);
* pressure-rate and tilt-rate statistics are taken over the magnitude of the
  rate series ("speed of changes"), so the CV mean-guard is not tripped by
  sign-balanced rates;
* a recording with zero strokes yields all 38 features missing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..strokes import TASKS, DrawingSession, TaskRecording
from .kinematics import DEFAULT_SMOOTHING_WINDOW, KinematicSeries, kinematic_series
from .registry import FEATURE_INDEX, FEATURE_NAMES, N_SESSION_FEATURES, SESSION_COLUMNS
from .stats import (
    count_local_extrema,
    cv,
    cv_across_strokes,
    cv_within_strokes,
    pooled_median,
    sd_across_strokes,
    sd_within_strokes,
)


@dataclass(frozen=True)
class TaskFeatures:
    """The 38 named feature values for one task, with a missing mask."""

    task: str
    values: np.ndarray
    missing: np.ndarray

    def value(self, name: str) -> float:
        return float(self.values[FEATURE_INDEX[name]])

    def is_missing(self, name: str) -> bool:
        return bool(self.missing[FEATURE_INDEX[name]])

    def as_dict(self) -> dict[str, float | None]:
        return {
            name: (None if self.missing[i] else float(self.values[i]))
            for i, name in enumerate(FEATURE_NAMES)
        }


@dataclass(frozen=True)
class SessionFeatureVector:
    """190 session features, task-major, with column names and missing mask."""

    session_id: str
    values: np.ndarray
    missing: np.ndarray

    @property
    def columns(self) -> tuple[str, ...]:
        return SESSION_COLUMNS

    def value(self, column: str) -> float:
        return float(self.values[SESSION_COLUMNS.index(column)])


def _series_stats(out: dict, prefix: str, series: list[np.ndarray]) -> None:
    out[f"{prefix}_median"] = pooled_median(series)
    out[f"{prefix}_cv_across"] = cv_across_strokes(series)
    out[f"{prefix}_cv_within"] = cv_within_strokes(series)


def _extrema_stats(out: dict, prefix: str, series: list[np.ndarray],
                   path_total: float, drawing_total: float) -> None:
    if not series:
        out[f"{prefix}_extrema_per_length"] = np.nan
        out[f"{prefix}_extrema_per_time"] = np.nan
        return
    count = float(sum(count_local_extrema(s) for s in series))
    out[f"{prefix}_extrema_per_length"] = count / path_total if path_total > 0 else np.nan
    out[f"{prefix}_extrema_per_time"] = count / drawing_total if drawing_total > 0 else np.nan


def extract_task_features(
    recording: TaskRecording, window: int = DEFAULT_SMOOTHING_WINDOW
) -> TaskFeatures:
    """Compute the 38-feature battery for one task recording."""
    strokes = recording.strokes
    eligible = [s for s in strokes if s.derivative_eligible]
    series: list[KinematicSeries] = [kinematic_series(s, window) for s in eligible]

    path_total = float(sum(s.path_length_mm for s in strokes))
    drawing_total = float(sum(s.duration_s for s in strokes))
    pause_durations = np.array([p.duration_s for p in recording.pauses])

    f: dict[str, float] = {}

    for channel in ("speed", "accel", "jerk"):
        per_stroke = [getattr(k, channel) for k in series]
        _series_stats(f, channel, per_stroke)
        _extrema_stats(f, channel, per_stroke, path_total, drawing_total)

    pressure = [k.pressure for k in series]
    _series_stats(f, "pressure", pressure)
    _extrema_stats(f, "pressure", pressure, path_total, drawing_total)
    pressure_rate_abs = [np.abs(k.pressure_rate) for k in series]
    f["pressure_rate_median"] = pooled_median(pressure_rate_abs)
    f["pressure_rate_cv_across"] = cv_across_strokes(pressure_rate_abs)
    f["pressure_rate_cv_within"] = cv_within_strokes(pressure_rate_abs)

    for axis in ("x", "y"):
        tilt = [getattr(k, f"tilt_{axis}") for k in series]
        rate_abs = [np.abs(getattr(k, f"tilt_{axis}_rate")) for k in series]
        f[f"tilt_{axis}_sd_across"] = sd_across_strokes(tilt)
        f[f"tilt_{axis}_sd_within"] = sd_within_strokes(tilt)
        f[f"tilt_{axis}_rate_abs_median"] = pooled_median(rate_abs)
        f[f"tilt_{axis}_rate_cv_across"] = cv_across_strokes(rate_abs)
        f[f"tilt_{axis}_rate_cv_within"] = cv_within_strokes(rate_abs)

    if strokes:
        f["n_drawings"] = float(len(strokes))
        if pause_durations.size == 0:
            f["pause_mean"] = 0.0
            f["pause_cv"] = 0.0
            pause_total = 0.0
        else:
            f["pause_mean"] = float(pause_durations.mean())
            f["pause_cv"] = 0.0 if pause_durations.size == 1 else cv(pause_durations)
            pause_total = float(pause_durations.sum())
        f["pause_drawing_ratio"] = pause_total / drawing_total if drawing_total > 0 else np.nan
        f["adjusted_total_duration"] = (
            (pause_total + drawing_total) / path_total if path_total > 0 else np.nan
        )
    else:
        for name in ("pause_mean", "pause_cv", "n_drawings",
                     "pause_drawing_ratio", "adjusted_total_duration"):
            f[name] = np.nan

    values = np.array([f[name] for name in FEATURE_NAMES], dtype=np.float64)
    return TaskFeatures(task=recording.task, values=values, missing=np.isnan(values))


def extract_session_features(
    session: DrawingSession, window: int = DEFAULT_SMOOTHING_WINDOW
) -> SessionFeatureVector:
    """Assemble the 190-entry task-major vector; missing tasks are fully masked."""
    values = np.full(N_SESSION_FEATURES, np.nan)
    for ti, task in enumerate(TASKS):
        rec = session.recordings.get(task)
        if rec is None:
            continue
        tf = extract_task_features(rec, window)
        values[ti * len(FEATURE_NAMES):(ti + 1) * len(FEATURE_NAMES)] = tf.values
    return SessionFeatureVector(
        session_id=session.session_id, values=values, missing=np.isnan(values)
    )
