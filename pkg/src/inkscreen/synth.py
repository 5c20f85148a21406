"""Seeded synthetic drawing sessions standing in for the private cohort.

A single impairment parameter theta in [0, 1] drives every effect channel in
the direction reported for cognitive decline: drawing speed falls, speed
variability and tremor rise, pen lifts grow more frequent and pauses longer,
pressure drops and grows more variable, and pen posture drifts more. Labels
follow a fixed model: mmse = round(29 - 10*theta + N(0,1)) clamped to
[0, 30]; mtl_z = 0.8 + 1.4*theta + N(0, 0.3); diagnosis CN below 0.33,
MCI below 0.66, DEMENTIA otherwise.

Coordinates are quantized to 1/128 mm and timestamps to 1/1024 ms, matching
digitizer-style discretization and keeping whole-session translations exact
in float64. Same (spec, seed) always yields identical session bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BadSpec
from .strokes import (
    TASKS,
    DrawingSession,
    SubjectRecord,
    recording_from_arrays,
)
from .tasks import load_layouts
from .util import rng_for, seed_for

CN_MAX_THETA = 1.0 / 3.0
MCI_MAX_THETA = 2.0 / 3.0


@dataclass(frozen=True)
class CohortSpec:
    """Generator knobs; (lo, hi) pairs interpolate linearly from theta=0 to 1."""

    theta: float = 0.0
    sampling_hz: float = 150.0
    speed_mean_mmps: tuple[float, float] = (38.0, 12.0)
    speed_cv: tuple[float, float] = (0.10, 0.30)
    tremor_amp_mm: tuple[float, float] = (0.05, 0.60)
    tremor_hz: float = 5.5
    extra_pauses: tuple[float, float] = (0.8, 6.0)
    pause_mean_s: tuple[float, float] = (0.25, 1.35)
    pause_sigma: float = 0.35
    pressure_mean: tuple[float, float] = (0.55, 0.37)
    pressure_cv: tuple[float, float] = (0.06, 0.20)
    tilt_drift_sd_deg: tuple[float, float] = (0.8, 4.8)
    layout_path: str | None = None

    def at(self, pair: tuple[float, float]) -> float:
        return pair[0] + (pair[1] - pair[0]) * self.theta

    def validate(self) -> None:
        if not 0.0 <= self.theta <= 1.0:
            raise BadSpec(f"theta {self.theta} outside [0, 1]")
        if self.sampling_hz <= 0:
            raise BadSpec("sampling_hz must be positive")
        if self.at(self.speed_mean_mmps) <= 0:
            raise BadSpec("speed mean must stay positive")
        if not 0 < self.at(self.pressure_mean) <= 1:
            raise BadSpec("pressure mean must stay in (0, 1]")
        if self.at(self.pause_mean_s) <= 0:
            raise BadSpec("pause mean must stay positive")


def _quantize(v: np.ndarray, step_inv: float) -> np.ndarray:
    return np.round(v * step_inv) / step_inv


def _polyline_length(points: np.ndarray) -> float:
    return float(np.hypot(np.diff(points[:, 0]), np.diff(points[:, 1])).sum())


def _point_at(points: np.ndarray, seg_len: np.ndarray, s: float) -> tuple[float, float, float, float]:
    """Position and unit tangent at arc length s along a polyline."""
    total = seg_len.sum()
    s = min(max(s, 0.0), total)
    acc = 0.0
    for i in range(seg_len.shape[0]):
        if s <= acc + seg_len[i] or i == seg_len.shape[0] - 1:
            frac = 0.0 if seg_len[i] == 0 else (s - acc) / seg_len[i]
            p0, p1 = points[i], points[i + 1]
            tx, ty = p1[0] - p0[0], p1[1] - p0[1]
            norm = math.hypot(tx, ty) or 1.0
            return (
                p0[0] + frac * (p1[0] - p0[0]),
                p0[1] + frac * (p1[1] - p0[1]),
                tx / norm,
                ty / norm,
            )
        acc += seg_len[i]
    raise AssertionError("unreachable")


def _ar1(rng: np.random.Generator, n: int, phi: float = 0.95) -> np.ndarray:
    eps = rng.normal(size=n)
    out = np.empty(n)
    out[0] = eps[0]
    scale = math.sqrt(1.0 - phi * phi)
    for i in range(1, n):
        out[i] = phi * out[i - 1] + scale * eps[i]
    return out


def _sentence_template(rng: np.random.Generator) -> list[np.ndarray]:
    strokes = []
    x = 30.0
    base_y = 60.0 + rng.uniform(-5, 5)
    for _ in range(5):
        width = rng.uniform(24, 34)
        xs = np.linspace(x, x + width, 14)
        ys = base_y + 5.0 * np.sin(xs * rng.uniform(0.8, 1.2)) + rng.normal(0, 0.8, 14)
        strokes.append(np.column_stack([xs, ys]))
        x += width + rng.uniform(5, 9)
    return strokes


def _pentagon_template(rng: np.random.Generator) -> list[np.ndarray]:
    strokes = []
    for cx in (105.0, 152.0):
        ang0 = rng.uniform(-0.2, 0.2)
        angles = ang0 + np.linspace(0, 2 * math.pi, 6) - math.pi / 2
        r = 32.0 + rng.uniform(-2, 2)
        xs = cx + r * np.cos(angles)
        ys = 88.0 + r * np.sin(angles)
        strokes.append(np.column_stack([xs, ys]))
    return strokes


def _tmt_template(targets: list[dict], rng: np.random.Generator) -> list[np.ndarray]:
    pts = np.array([[t["x"], t["y"]] for t in targets])
    pts = pts + rng.normal(0, 0.8, pts.shape)
    # connect the tour as a handful of long strokes
    cuts = (0, 7, 13, 19, 25)
    return [pts[a:b] for a, b in zip(cuts[:-1], cuts[1:]) if b - a >= 2]


def _cdt_template(rng: np.random.Generator) -> list[np.ndarray]:
    cx, cy, r = 130.0, 85.0, 46.0 + rng.uniform(-2, 2)
    angles = np.linspace(0, 2 * math.pi, 40) - math.pi / 2
    circle = np.column_stack([cx + r * np.cos(angles), cy + r * np.sin(angles)])
    strokes = [circle]
    for hour in (12, 3, 6, 9):
        a = hour / 12.0 * 2 * math.pi - math.pi / 2
        outer = np.array([cx + r * math.cos(a), cy + r * math.sin(a)])
        inner = np.array([cx + (r - 7) * math.cos(a), cy + (r - 7) * math.sin(a)])
        strokes.append(np.vstack([outer, inner]))
    # hands for 10 o'clock: hour hand to 10, minute hand to 12
    for hour, frac in ((10, 0.5), (12, 0.85)):
        a = hour / 12.0 * 2 * math.pi - math.pi / 2
        tip = np.array([cx + frac * r * math.cos(a), cy + frac * r * math.sin(a)])
        strokes.append(np.vstack([[cx, cy], tip]))
    return strokes


def _task_templates(task: str, spec: CohortSpec, rng: np.random.Generator,
                    layouts: dict) -> list[np.ndarray]:
    if task == "SENTENCE":
        return _sentence_template(rng)
    if task == "PENTAGON":
        return _pentagon_template(rng)
    if task == "TMT_A":
        return _tmt_template(layouts["TMT_A"], rng)
    if task == "TMT_B":
        return _tmt_template(layouts["TMT_B"], rng)
    return _cdt_template(rng)


def _trace_stroke(points: np.ndarray, spec: CohortSpec, rng: np.random.Generator,
                  speed_base: float, t0_s: float) -> dict:
    """Sample a pen trajectory along a waypoint polyline."""
    seg = np.column_stack([np.diff(points[:, 0]), np.diff(points[:, 1])])
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    total = float(seg_len.sum())
    dt = 1.0 / spec.sampling_hz
    n_est = max(int(total / max(speed_base, 1.0) / dt * 2.5) + 16, 16)
    speed_noise = _ar1(rng, n_est)
    tremor_phase = rng.uniform(0, 2 * math.pi)
    amp = spec.at(spec.tremor_amp_mm)
    cv = spec.at(spec.speed_cv)

    xs, ys, ts = [], [], []
    s = 0.0
    k = 0
    while s < total and k < n_est:
        t = t0_s + k * dt
        px, py, tx, ty = _point_at(points, seg_len, s)
        wobble = amp * math.sin(2 * math.pi * spec.tremor_hz * t + tremor_phase)
        xs.append(px + wobble * -ty + rng.normal(0, 0.02))
        ys.append(py + wobble * tx + rng.normal(0, 0.02))
        ts.append(t)
        v = max(speed_base * (1.0 + cv * speed_noise[k]), 1.0)
        s += v * dt
        k += 1
    return {"x": np.array(xs), "y": np.array(ys), "t_s": np.array(ts)}


def _split_stroke(stroke: dict, n_cuts: int, rng: np.random.Generator) -> list[dict]:
    n = stroke["x"].shape[0]
    if n_cuts <= 0 or n < 16:
        return [stroke]
    cuts = np.sort(rng.integers(6, n - 6, size=n_cuts))
    pieces = []
    start = 0
    for c in list(cuts) + [n]:
        if c - start >= 4:
            pieces.append({k: v[start:c] for k, v in stroke.items()})
            start = c
    return pieces or [stroke]


def generate_task_recording(task: str, spec: CohortSpec, seed: int, layouts: dict):
    """Generate one task recording; deterministic in (task, spec, seed)."""
    rng = rng_for(seed, "task", task)
    templates = _task_templates(task, spec, rng, layouts)
    speed_scale = {"SENTENCE": 0.8, "PENTAGON": 0.9, "TMT_A": 1.2, "TMT_B": 1.1, "CDT": 1.0}[task]
    speed_base = spec.at(spec.speed_mean_mmps) * speed_scale * rng.lognormal(0, 0.05)

    raw_strokes: list[dict] = []
    cursor = 0.0
    n_extra = int(rng.poisson(spec.at(spec.extra_pauses)))
    cuts_per_stroke = np.bincount(
        rng.integers(0, len(templates), size=n_extra), minlength=len(templates)
    )
    pause_mu = math.log(spec.at(spec.pause_mean_s))
    for si, points in enumerate(templates):
        traced = _trace_stroke(points, spec, rng, speed_base, cursor)
        pieces = _split_stroke(traced, int(cuts_per_stroke[si]), rng)
        for piece in pieces:
            piece = dict(piece)
            piece["t_s"] = piece["t_s"] - piece["t_s"][0] + cursor
            raw_strokes.append(piece)
            cursor = piece["t_s"][-1] + max(rng.lognormal(pause_mu, spec.pause_sigma), 0.06)

    # pressure and tilt channels, then interleave hover samples inside pauses
    p_base = spec.at(spec.pressure_mean)
    p_cv = spec.at(spec.pressure_cv)
    drift_sd = spec.at(spec.tilt_drift_sd_deg)
    tilt_x0 = rng.uniform(12, 30)
    tilt_y0 = rng.uniform(-28, -10)

    t_all, x_all, y_all, p_all, tx_all, ty_all, down_all = [], [], [], [], [], [], []
    for si, stroke in enumerate(raw_strokes):
        n = stroke["x"].shape[0]
        pressure = np.clip(p_base * (1.0 + p_cv * _ar1(rng, n)), 0.03, 1.0)
        tilt_x = np.clip(tilt_x0 + np.cumsum(rng.normal(0, drift_sd / 18.0, n)), -90, 90)
        tilt_y = np.clip(tilt_y0 + np.cumsum(rng.normal(0, drift_sd / 18.0, n)), -90, 90)
        t_all.append(stroke["t_s"] * 1000.0)
        x_all.append(stroke["x"])
        y_all.append(stroke["y"])
        p_all.append(pressure)
        tx_all.append(tilt_x)
        ty_all.append(tilt_y)
        down_all.append(np.ones(n, dtype=bool))
        if si + 1 < len(raw_strokes):
            gap_start = stroke["t_s"][-1]
            gap_end = raw_strokes[si + 1]["t_s"][0]
            hover_t = gap_start + (gap_end - gap_start) * np.array([1 / 3, 2 / 3])
            hx = stroke["x"][-1] + (raw_strokes[si + 1]["x"][0] - stroke["x"][-1]) * np.array([1 / 3, 2 / 3])
            hy = stroke["y"][-1] + (raw_strokes[si + 1]["y"][0] - stroke["y"][-1]) * np.array([1 / 3, 2 / 3])
            t_all.append(hover_t * 1000.0)
            x_all.append(hx)
            y_all.append(hy)
            p_all.append(np.zeros(2))
            tx_all.append(np.full(2, tilt_x[-1]))
            ty_all.append(np.full(2, tilt_y[-1]))
            down_all.append(np.zeros(2, dtype=bool))

    t = _quantize(np.concatenate(t_all), 1024.0)
    x = _quantize(np.concatenate(x_all), 128.0)
    y = _quantize(np.concatenate(y_all), 128.0)
    p = _quantize(np.concatenate(p_all), 1024.0)
    tx = _quantize(np.concatenate(tx_all), 64.0)
    ty = _quantize(np.concatenate(ty_all), 64.0)
    down = np.concatenate(down_all)
    p[~down] = 0.0
    return recording_from_arrays(task, t, x, y, p, tx, ty, down)


def generate_session(spec: CohortSpec, seed: int, session_id: str | None = None,
                     subject: SubjectRecord | None = None) -> DrawingSession:
    """Generate a full five-task session; byte-deterministic in (spec, seed)."""
    spec.validate()
    layouts = load_layouts(spec.layout_path)
    recordings = {
        task: generate_task_recording(task, spec, seed, layouts) for task in TASKS
    }
    return DrawingSession(
        session_id=session_id or f"synth-{seed}",
        subject=subject,
        recordings=recordings,
    )


def label_model(theta: float, rng: np.random.Generator) -> SubjectRecord:
    mmse = int(np.clip(round(29.0 - 10.0 * theta + rng.normal()), 0, 30))
    mtl = float(0.8 + 1.4 * theta + rng.normal(0, 0.3))
    if theta < CN_MAX_THETA:
        diagnosis = "CN"
    elif theta < MCI_MAX_THETA:
        diagnosis = "MCI"
    else:
        diagnosis = "DEMENTIA"
    return SubjectRecord(diagnosis=diagnosis, mmse=mmse, mtl_atrophy_z=mtl)


def table1_thetas(seed: int, counts: tuple[int, int, int] = (46, 67, 32)) -> np.ndarray:
    """Impairment values stratified to the reference group sizes CN/MCI/dementia."""
    rng = rng_for(seed, "thetas")
    cn = rng.uniform(0.02, CN_MAX_THETA - 0.02, counts[0])
    mci = rng.uniform(CN_MAX_THETA + 0.02, MCI_MAX_THETA - 0.02, counts[1])
    dem = rng.uniform(MCI_MAX_THETA + 0.02, 0.98, counts[2])
    return np.concatenate([cn, mci, dem])


def generate_cohort(
    n: int | None = None,
    thetas: np.ndarray | None = None,
    seed: int = 0,
    base_spec: CohortSpec | None = None,
) -> list[DrawingSession]:
    """Generate labeled sessions; thetas default to uniform [0, 1] draws."""
    if thetas is None:
        if n is None or n < 1:
            raise BadSpec("need n >= 1 when thetas are not given")
        thetas = rng_for(seed, "uniform_thetas").uniform(0, 1, n)
    thetas = np.asarray(thetas, dtype=np.float64)
    base = base_spec or CohortSpec()
    sessions = []
    for i, theta in enumerate(thetas.tolist()):
        spec = replace(base, theta=theta)
        subject = label_model(theta, rng_for(seed, "labels", i))
        sessions.append(
            generate_session(
                spec,
                seed_for(seed, "subject", i),
                session_id=f"synth-{seed}-{i:04d}",
                subject=subject,
            )
        )
    return sessions
