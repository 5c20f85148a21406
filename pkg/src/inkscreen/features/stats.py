"""Summary statistics over stroke series: CV, pooled medians, extrema counts.

Missing values propagate as NaN throughout; a feature is missing, never
silently zero, whenever its inputs are unavailable or a guard fires.
"""

from __future__ import annotations

import numpy as np

from .._accel import NUMBA_ENABLED, njit

#: relative guard below which a mean is treated as zero and CV is missing
MEAN_GUARD_REL = 1e-12


def cv(values: np.ndarray) -> float:
    """Coefficient of variation: sample SD (n-1) over the mean.

    Missing (NaN) when fewer than two values or when |mean| is below
    MEAN_GUARD_REL times the largest absolute value.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return np.nan
    m = float(v.mean())
    scale = float(np.abs(v).max())
    if abs(m) <= MEAN_GUARD_REL * scale:
        return np.nan
    return float(v.std(ddof=1)) / m


def sample_sd(values: np.ndarray) -> float:
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return np.nan
    return float(v.std(ddof=1))


def pooled_median(series_per_stroke: list[np.ndarray]) -> float:
    """Median over the concatenation of all strokes' values; NaN when empty."""
    if not series_per_stroke:
        return np.nan
    pooled = np.concatenate(series_per_stroke)
    if pooled.size == 0:
        return np.nan
    return float(np.median(pooled))


def cv_across_strokes(series_per_stroke: list[np.ndarray]) -> float:
    """CV of the per-stroke means; needs at least two strokes."""
    if len(series_per_stroke) < 2:
        return np.nan
    means = np.array([s.mean() for s in series_per_stroke])
    return cv(means)


def cv_within_strokes(series_per_stroke: list[np.ndarray]) -> float:
    """Unweighted mean of per-stroke CVs, skipping strokes whose CV is missing."""
    if not series_per_stroke:
        return np.nan
    cvs = np.array([cv(s) for s in series_per_stroke])
    cvs = cvs[~np.isnan(cvs)]
    if cvs.size == 0:
        return np.nan
    return float(cvs.mean())


def sd_across_strokes(series_per_stroke: list[np.ndarray]) -> float:
    """Sample SD of the per-stroke means."""
    if len(series_per_stroke) < 2:
        return np.nan
    return sample_sd(np.array([s.mean() for s in series_per_stroke]))


def sd_within_strokes(series_per_stroke: list[np.ndarray]) -> float:
    """Unweighted mean of per-stroke sample SDs."""
    if not series_per_stroke:
        return np.nan
    sds = np.array([sample_sd(s) for s in series_per_stroke])
    sds = sds[~np.isnan(sds)]
    if sds.size == 0:
        return np.nan
    return float(sds.mean())


@njit(cache=True)
def _count_extrema_loop(x: np.ndarray) -> int:
    # Strict interior extrema; a plateau bounded by a rise on one side and a
    # fall on the other counts once (each sign flip of the step sequence).
    n = x.shape[0]
    count = 0
    prev = 0
    for i in range(1, n):
        d = x[i] - x[i - 1]
        s = 0
        if d > 0.0:
            s = 1
        elif d < 0.0:
            s = -1
        if s != 0:
            if prev != 0 and s != prev:
                count += 1
            prev = s
    return count


def _count_extrema_numpy(x: np.ndarray) -> int:
    s = np.sign(np.diff(x))
    s = s[s != 0]
    if s.size < 2:
        return 0
    return int(np.count_nonzero(s[1:] != s[:-1]))


def count_local_extrema(series: np.ndarray) -> int:
    """Count interior local maxima and minima (plateaus count once)."""
    x = np.ascontiguousarray(series, dtype=np.float64)
    if x.shape[0] < 3:
        return 0
    if NUMBA_ENABLED:
        return int(_count_extrema_loop(x))
    return _count_extrema_numpy(x)
