"""Per-stroke kinematic series: smoothing, nonuniform finite differences.

Conventions pinned here (the brute-force oracle in the test suite mirrors
them independently):

* smoothing is a centered moving average whose window truncates at the
  series boundaries (output length equals input length);
* derivatives use the bracketing-neighbor difference
  (f[i+1] - f[i-1]) / (t[i+1] - t[i-1]) at interior points and one-sided
  differences at the endpoints, which is exact for affine input on any grid;
* speed, acceleration, and jerk are magnitudes of successive vector
  derivatives of the smoothed pen position, not derivatives of scalar speed;
* positions and timestamps are re-centered on the stroke's first sample
  before any arithmetic, making translation and time-origin invariance
  structural;
* pressure and tilt are smoothed with the same window before their rates
  are taken.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import EvenWindow, TooShort
from ..strokes import Stroke

DEFAULT_SMOOTHING_WINDOW = 5


def smooth(series: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average with shrinking windows at the boundaries."""
    if window < 1 or window % 2 == 0:
        raise EvenWindow(f"window must be odd and >= 1, got {window}")
    x = np.asarray(series, dtype=np.float64)
    n = x.shape[0]
    if n == 0:
        raise TooShort("cannot smooth an empty series")
    if window == 1 or n == 1:
        return x.copy()
    h = window // 2
    out = np.empty(n)
    if n >= window:
        out[h:n - h] = sliding_window_view(x, window).mean(axis=1)
        for i in range(h):
            out[i] = x[: i + h + 1].mean()
            out[n - 1 - i] = x[n - 1 - i - h:].mean()
    else:
        for i in range(n):
            out[i] = x[max(0, i - h): i + h + 1].mean()
    return out


def differentiate(values: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Finite-difference derivative on strictly increasing timestamps.

    Accepts (n,) or (n, 2) values; 2-vectors differentiate componentwise.
    """
    v = np.asarray(values, dtype=np.float64)
    ts = np.asarray(t, dtype=np.float64)
    n = ts.shape[0]
    if n < 3 or v.shape[0] != n:
        raise TooShort(f"need >= 3 samples, got {v.shape[0]} values over {n} timestamps")
    dt_edge = ts[1:] - ts[:-1]
    dt_span = ts[2:] - ts[:-2]
    if v.ndim == 2:
        dt_edge = dt_edge[:, None]
        dt_span = dt_span[:, None]
    out = np.empty_like(v)
    out[0] = (v[1] - v[0]) / dt_edge[0]
    out[-1] = (v[-1] - v[-2]) / dt_edge[-1]
    out[1:-1] = (v[2:] - v[:-2]) / dt_span
    return out


@dataclass(frozen=True)
class KinematicSeries:
    """Time-aligned per-stroke series; one value per stroke sample.

    speed/accel/jerk are nonnegative magnitudes (mm/s, mm/s^2, mm/s^3);
    pressure and tilt are the smoothed level series; rates are signed.
    """

    speed: np.ndarray
    accel: np.ndarray
    jerk: np.ndarray
    pressure: np.ndarray
    pressure_rate: np.ndarray
    tilt_x: np.ndarray
    tilt_y: np.ndarray
    tilt_x_rate: np.ndarray
    tilt_y_rate: np.ndarray


def kinematic_series(stroke: Stroke, window: int = DEFAULT_SMOOTHING_WINDOW) -> KinematicSeries:
    """Compute the full per-stroke series battery for an eligible stroke."""
    if not stroke.derivative_eligible:
        raise TooShort(f"stroke has {stroke.n} samples; need >= 3")
    ts = (stroke.t - stroke.t[0]) / 1000.0
    xs = smooth(stroke.x - stroke.x[0], window)
    ys = smooth(stroke.y - stroke.y[0], window)
    pos = np.stack([xs, ys], axis=1)
    vel = differentiate(pos, ts)
    acc = differentiate(vel, ts)
    jrk = differentiate(acc, ts)

    pressure = smooth(stroke.pressure, window)
    tilt_x = smooth(stroke.tilt_x, window)
    tilt_y = smooth(stroke.tilt_y, window)

    return KinematicSeries(
        speed=np.hypot(vel[:, 0], vel[:, 1]),
        accel=np.hypot(acc[:, 0], acc[:, 1]),
        jerk=np.hypot(jrk[:, 0], jrk[:, 1]),
        pressure=pressure,
        pressure_rate=differentiate(pressure, ts),
        tilt_x=tilt_x,
        tilt_y=tilt_y,
        tilt_x_rate=differentiate(tilt_x, ts),
        tilt_y_rate=differentiate(tilt_y, ts),
    )
