"""Brute-force reference implementation of the per-task feature battery.

Pure-Python straight-line code, independent of the package's numpy pipeline:
every formula is re-derived from the documented conventions (centered
truncated-window means, bracketing-neighbor differences, sample SD, the CV
mean guard, plateau-as-one extrema, eligible-stroke series with all-stroke
totals). Used to cross-check the extractor to 1e-9 relative error.
"""

from __future__ import annotations

import math

MEAN_GUARD_REL = 1e-12
MIN_ELIGIBLE = 3


def _mean(v):
    return math.fsum(v) / len(v)


def _sample_sd(v):
    if len(v) < 2:
        return None
    m = _mean(v)
    return math.sqrt(math.fsum((x - m) ** 2 for x in v) / (len(v) - 1))


def _median(v):
    s = sorted(v)
    n = len(s)
    if n == 0:
        return None
    if n % 2:
        return s[n // 2]
    return 0.5 * (s[n // 2 - 1] + s[n // 2])


def _cv(v):
    if len(v) < 2:
        return None
    m = _mean(v)
    scale = max(abs(x) for x in v)
    if abs(m) <= MEAN_GUARD_REL * scale:
        return None
    return _sample_sd(v) / m


def _smooth(v, window):
    h = window // 2
    n = len(v)
    return [_mean(v[max(0, i - h):min(n, i + h + 1)]) for i in range(n)]


def _deriv(v, t):
    n = len(v)
    out = [0.0] * n
    out[0] = (v[1] - v[0]) / (t[1] - t[0])
    out[-1] = (v[-1] - v[-2]) / (t[-1] - t[-2])
    for i in range(1, n - 1):
        out[i] = (v[i + 1] - v[i - 1]) / (t[i + 1] - t[i - 1])
    return out


def _extrema(v):
    count = 0
    prev = 0
    for i in range(1, len(v)):
        d = v[i] - v[i - 1]
        s = 1 if d > 0 else (-1 if d < 0 else 0)
        if s != 0:
            if prev != 0 and s != prev:
                count += 1
            prev = s
    return count


def _segment(samples):
    """samples: list of (t, x, y, p, tx, ty, down) tuples -> list of strokes."""
    strokes = []
    current = None
    for s in samples:
        if s[6]:
            if current is None:
                current = []
                strokes.append(current)
            current.append(s)
        else:
            current = None
    return strokes


def _stroke_series(stroke, window):
    t0, x0, y0 = stroke[0][0], stroke[0][1], stroke[0][2]
    ts = [(s[0] - t0) / 1000.0 for s in stroke]
    xs = _smooth([s[1] - x0 for s in stroke], window)
    ys = _smooth([s[2] - y0 for s in stroke], window)
    vx, vy = _deriv(xs, ts), _deriv(ys, ts)
    ax, ay = _deriv(vx, ts), _deriv(vy, ts)
    jx, jy = _deriv(ax, ts), _deriv(ay, ts)
    ps = _smooth([s[3] for s in stroke], window)
    txs = _smooth([s[4] for s in stroke], window)
    tys = _smooth([s[5] for s in stroke], window)
    return {
        "speed": [math.hypot(a, b) for a, b in zip(vx, vy)],
        "accel": [math.hypot(a, b) for a, b in zip(ax, ay)],
        "jerk": [math.hypot(a, b) for a, b in zip(jx, jy)],
        "pressure": ps,
        "pressure_rate": _deriv(ps, ts),
        "tilt_x": txs,
        "tilt_y": tys,
        "tilt_x_rate": _deriv(txs, ts),
        "tilt_y_rate": _deriv(tys, ts),
    }


def _pooled_median(series_list):
    pooled = [v for s in series_list for v in s]
    return _median(pooled)


def _cv_across(series_list):
    if len(series_list) < 2:
        return None
    return _cv([_mean(s) for s in series_list])


def _cv_within(series_list):
    vals = [c for c in (_cv(s) for s in series_list) if c is not None]
    if not vals:
        return None
    return _mean(vals)


def oracle_task_features(samples, window=5):
    """samples: (t_ms, x, y, p, tx, ty, down) tuples -> {feature: value|None}."""
    strokes = _segment(samples)
    out = {}

    if not strokes:
        names = []
        for ch in ("speed", "accel", "jerk"):
            names += [f"{ch}_{s}" for s in
                      ("median", "cv_across", "cv_within", "extrema_per_length", "extrema_per_time")]
        names += ["pressure_median", "pressure_cv_across", "pressure_cv_within",
                  "pressure_extrema_per_length", "pressure_extrema_per_time",
                  "pressure_rate_median", "pressure_rate_cv_across", "pressure_rate_cv_within"]
        for ax in ("x", "y"):
            names += [f"tilt_{ax}_{s}" for s in
                      ("sd_across", "sd_within", "rate_abs_median", "rate_cv_across", "rate_cv_within")]
        names += ["pause_mean", "pause_cv", "n_drawings", "pause_drawing_ratio",
                  "adjusted_total_duration"]
        return {n: None for n in names}

    path_total = math.fsum(
        math.fsum(
            math.hypot(b[1] - a[1], b[2] - a[2]) for a, b in zip(st, st[1:])
        )
        for st in strokes
    )
    drawing_total = math.fsum((st[-1][0] - st[0][0]) / 1000.0 for st in strokes)
    pauses = [
        (nxt[0][0] - prev[-1][0]) / 1000.0 for prev, nxt in zip(strokes, strokes[1:])
    ]

    eligible = [st for st in strokes if len(st) >= MIN_ELIGIBLE]
    series = [_stroke_series(st, window) for st in eligible]

    def extrema_pair(prefix, per_stroke):
        if not per_stroke:
            out[f"{prefix}_extrema_per_length"] = None
            out[f"{prefix}_extrema_per_time"] = None
            return
        count = float(sum(_extrema(s) for s in per_stroke))
        out[f"{prefix}_extrema_per_length"] = count / path_total if path_total > 0 else None
        out[f"{prefix}_extrema_per_time"] = count / drawing_total if drawing_total > 0 else None

    for ch in ("speed", "accel", "jerk", "pressure"):
        per_stroke = [s[ch] for s in series]
        out[f"{ch}_median"] = _pooled_median(per_stroke) if per_stroke else None
        out[f"{ch}_cv_across"] = _cv_across(per_stroke)
        out[f"{ch}_cv_within"] = _cv_within(per_stroke)
        extrema_pair(ch, per_stroke)

    pr_abs = [[abs(v) for v in s["pressure_rate"]] for s in series]
    out["pressure_rate_median"] = _pooled_median(pr_abs) if pr_abs else None
    out["pressure_rate_cv_across"] = _cv_across(pr_abs)
    out["pressure_rate_cv_within"] = _cv_within(pr_abs)

    for axis in ("x", "y"):
        tilt = [s[f"tilt_{axis}"] for s in series]
        rate_abs = [[abs(v) for v in s[f"tilt_{axis}_rate"]] for s in series]
        out[f"tilt_{axis}_sd_across"] = (
            _sample_sd([_mean(s) for s in tilt]) if len(tilt) >= 2 else None
        )
        sds = [sd for sd in (_sample_sd(s) for s in tilt) if sd is not None]
        out[f"tilt_{axis}_sd_within"] = _mean(sds) if sds else None
        out[f"tilt_{axis}_rate_abs_median"] = _pooled_median(rate_abs) if rate_abs else None
        out[f"tilt_{axis}_rate_cv_across"] = _cv_across(rate_abs)
        out[f"tilt_{axis}_rate_cv_within"] = _cv_within(rate_abs)

    out["n_drawings"] = float(len(strokes))
    if not pauses:
        out["pause_mean"] = 0.0
        out["pause_cv"] = 0.0
        pause_total = 0.0
    else:
        out["pause_mean"] = _mean(pauses)
        out["pause_cv"] = 0.0 if len(pauses) == 1 else _cv(pauses)
        pause_total = math.fsum(pauses)
    out["pause_drawing_ratio"] = pause_total / drawing_total if drawing_total > 0 else None
    out["adjusted_total_duration"] = (
        (pause_total + drawing_total) / path_total if path_total > 0 else None
    )
    return out


def recording_to_tuples(rec):
    """Adapter from a TaskRecording to the oracle's plain-tuple input."""
    return [
        (float(rec.t[i]), float(rec.x[i]), float(rec.y[i]), float(rec.pressure[i]),
         float(rec.tilt_x[i]), float(rec.tilt_y[i]), bool(rec.pen_down[i]))
        for i in range(rec.n_samples)
    ]
