"""Raw drawing-session model: parsing, stroke segmentation, validation.

A session file is UTF-8 JSON:

    {"session_id": str,
     "subject": {"diagnosis": "CN"|"MCI"|"DEMENTIA"|null,
                 "mmse": int|null, "mtl_atrophy_z": number|null} | null,
     "tasks": [{"task": "SENTENCE"|"PENTAGON"|"TMT_A"|"TMT_B"|"CDT",
                "samples": [{"t": ms, "x": mm, "y": mm, "p": 0..1,
                             "tx": deg, "ty": deg, "d": bool}, ...]}, ...]}

Field order is irrelevant and unknown fields are ignored. Positions are in
millimeters, timestamps in milliseconds; all derived durations are seconds.
Pen-up (hover) samples may carry position but must report zero pressure; they
never join strokes and matter only through the timestamps bounding pauses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptySession, MalformedInput, NonMonotonicTime, RangeViolation

TASKS = ("SENTENCE", "PENTAGON", "TMT_A", "TMT_B", "CDT")
DIAGNOSES = ("CN", "MCI", "DEMENTIA")

#: strokes shorter than this cannot support the finite-difference kinematics
MIN_DERIVATIVE_SAMPLES = 3


@dataclass(frozen=True)
class PenSample:
    """One digitizer report. Time in ms from task start, position in mm."""

    t: float
    x: float
    y: float
    pressure: float
    tilt_x: float
    tilt_y: float
    pen_down: bool


@dataclass(frozen=True)
class SubjectRecord:
    diagnosis: str | None = None
    mmse: int | None = None
    mtl_atrophy_z: float | None = None


@dataclass(frozen=True)
class Stroke:
    """A maximal pen-down run. Arrays are read-only views into the recording."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    pressure: np.ndarray
    tilt_x: np.ndarray
    tilt_y: np.ndarray

    @property
    def n(self) -> int:
        return int(self.t.shape[0])

    @property
    def duration_s(self) -> float:
        return float(self.t[-1] - self.t[0]) / 1000.0

    @cached_property
    def path_length_mm(self) -> float:
        if self.n < 2:
            return 0.0
        return float(np.hypot(np.diff(self.x), np.diff(self.y)).sum())

    @property
    def derivative_eligible(self) -> bool:
        return self.n >= MIN_DERIVATIVE_SAMPLES

    @property
    def samples(self) -> tuple[PenSample, ...]:
        return tuple(
            PenSample(
                float(self.t[i]), float(self.x[i]), float(self.y[i]),
                float(self.pressure[i]), float(self.tilt_x[i]),
                float(self.tilt_y[i]), True,
            )
            for i in range(self.n)
        )


@dataclass(frozen=True)
class Pause:
    """Pen-up gap between consecutive strokes; bounds are ms, duration seconds."""

    duration_s: float
    start_ms: float
    end_ms: float


@dataclass(frozen=True)
class TaskRecording:
    task: str
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    pressure: np.ndarray
    tilt_x: np.ndarray
    tilt_y: np.ndarray
    pen_down: np.ndarray
    strokes: tuple[Stroke, ...] = field(default=())
    pauses: tuple[Pause, ...] = field(default=())

    @property
    def n_samples(self) -> int:
        return int(self.t.shape[0])

    @property
    def samples(self) -> tuple[PenSample, ...]:
        return tuple(
            PenSample(
                float(self.t[i]), float(self.x[i]), float(self.y[i]),
                float(self.pressure[i]), float(self.tilt_x[i]),
                float(self.tilt_y[i]), bool(self.pen_down[i]),
            )
            for i in range(self.n_samples)
        )


@dataclass(frozen=True)
class DrawingSession:
    session_id: str
    subject: SubjectRecord | None
    recordings: Mapping[str, TaskRecording]

    def recording(self, task: str) -> TaskRecording | None:
        return self.recordings.get(task)


@dataclass(frozen=True)
class ValidationReport:
    """Advisory findings; never a rejection."""

    missing_tasks: tuple[str, ...]
    zero_stroke_tasks: tuple[str, ...]
    derivative_ineligible: Mapping[str, int]

    @property
    def is_clean(self) -> bool:
        return not (self.missing_tasks or self.zero_stroke_tasks or self.derivative_ineligible)

    def to_dict(self) -> dict:
        return {
            "missing_tasks": list(self.missing_tasks),
            "zero_stroke_tasks": list(self.zero_stroke_tasks),
            "derivative_ineligible": dict(self.derivative_ineligible),
        }


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _segment_ranges(pen_down: np.ndarray) -> list[tuple[int, int]]:
    """Half-open [start, stop) index ranges of maximal pen-down runs."""
    n = pen_down.shape[0]
    if n == 0:
        return []
    d = pen_down.astype(np.int8)
    changes = np.flatnonzero(np.diff(d))
    bounds = np.concatenate([[0], changes + 1, [n]])
    return [
        (int(bounds[i]), int(bounds[i + 1]))
        for i in range(len(bounds) - 1)
        if d[bounds[i]]
    ]


def recording_from_arrays(
    task: str,
    t: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    pressure: np.ndarray,
    tilt_x: np.ndarray,
    tilt_y: np.ndarray,
    pen_down: np.ndarray,
    validate: bool = True,
) -> TaskRecording:
    """Build a recording from raw columns, segmenting strokes and pauses."""
    t = _freeze(np.asarray(t, dtype=np.float64))
    x = _freeze(np.asarray(x, dtype=np.float64))
    y = _freeze(np.asarray(y, dtype=np.float64))
    pressure = _freeze(np.asarray(pressure, dtype=np.float64))
    tilt_x = _freeze(np.asarray(tilt_x, dtype=np.float64))
    tilt_y = _freeze(np.asarray(tilt_y, dtype=np.float64))
    pen_down = _freeze(np.asarray(pen_down, dtype=bool))
    if validate:
        _validate_columns(task, t, x, y, pressure, tilt_x, tilt_y, pen_down)

    strokes = []
    for start, stop in _segment_ranges(pen_down):
        strokes.append(
            Stroke(
                t=t[start:stop], x=x[start:stop], y=y[start:stop],
                pressure=pressure[start:stop],
                tilt_x=tilt_x[start:stop], tilt_y=tilt_y[start:stop],
            )
        )
    pauses = []
    for prev, nxt in zip(strokes, strokes[1:]):
        start_ms = float(prev.t[-1])
        end_ms = float(nxt.t[0])
        pauses.append(Pause((end_ms - start_ms) / 1000.0, start_ms, end_ms))

    return TaskRecording(
        task=task, t=t, x=x, y=y, pressure=pressure,
        tilt_x=tilt_x, tilt_y=tilt_y, pen_down=pen_down,
        strokes=tuple(strokes), pauses=tuple(pauses),
    )


def _validate_columns(task, t, x, y, pressure, tilt_x, tilt_y, pen_down) -> None:
    n = t.shape[0]
    for name, col in (("x", x), ("y", y), ("pressure", pressure),
                      ("tilt_x", tilt_x), ("tilt_y", tilt_y), ("pen_down", pen_down)):
        if col.shape[0] != n:
            raise MalformedInput(f"{task}: column '{name}' length {col.shape[0]} != {n}")
    if n == 0:
        return
    if not np.all(np.isfinite(t)) or not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise MalformedInput(f"{task}: non-finite sample values")
    if not np.all(np.isfinite(pressure)) or not np.all(np.isfinite(tilt_x)) or not np.all(np.isfinite(tilt_y)):
        raise MalformedInput(f"{task}: non-finite sample values")
    if t[0] < 0:
        raise RangeViolation(f"{task}: negative timestamp {t[0]}")
    if n > 1 and not np.all(np.diff(t) > 0):
        i = int(np.flatnonzero(np.diff(t) <= 0)[0])
        raise NonMonotonicTime(f"{task}: t[{i + 1}]={t[i + 1]} does not exceed t[{i}]={t[i]}")
    if np.any(pressure < 0) or np.any(pressure > 1):
        raise RangeViolation(f"{task}: pressure outside [0, 1]")
    if np.any(np.abs(tilt_x) > 90) or np.any(np.abs(tilt_y) > 90):
        raise RangeViolation(f"{task}: tilt outside [-90, 90] degrees")
    if np.any(pressure[~pen_down] != 0):
        raise RangeViolation(f"{task}: pen-up sample reports nonzero pressure")


def segment_strokes(
    samples: Sequence[PenSample],
) -> tuple[tuple[Stroke, ...], tuple[Pause, ...]]:
    """Split a validated sample sequence into strokes and inter-stroke pauses.

    Strokes are maximal pen-down runs; pause k spans from the last sample of
    stroke k to the first sample of stroke k+1. Strokes with fewer than
    MIN_DERIVATIVE_SAMPLES samples are kept (they count toward stroke counts,
    durations, and pauses) but are flagged derivative-ineligible.
    """
    rec = recording_from_arrays(
        "ADHOC",
        np.array([s.t for s in samples], dtype=np.float64),
        np.array([s.x for s in samples], dtype=np.float64),
        np.array([s.y for s in samples], dtype=np.float64),
        np.array([s.pressure for s in samples], dtype=np.float64),
        np.array([s.tilt_x for s in samples], dtype=np.float64),
        np.array([s.tilt_y for s in samples], dtype=np.float64),
        np.array([s.pen_down for s in samples], dtype=bool),
        validate=False,
    )
    return rec.strokes, rec.pauses


def _require_number(obj, key: str, ctx: str) -> float:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MalformedInput(f"{ctx}: field '{key}' missing or not a number")
    return float(v)


def _parse_subject(obj) -> SubjectRecord | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise MalformedInput("subject must be an object or null")
    diagnosis = obj.get("diagnosis")
    if diagnosis is not None:
        if diagnosis not in DIAGNOSES:
            raise MalformedInput(f"unknown diagnosis {diagnosis!r}")
    mmse = obj.get("mmse")
    if mmse is not None:
        if isinstance(mmse, bool) or not isinstance(mmse, int):
            raise MalformedInput("mmse must be an integer or null")
        if not 0 <= mmse <= 30:
            raise RangeViolation(f"mmse {mmse} outside [0, 30]")
    mtl = obj.get("mtl_atrophy_z")
    if mtl is not None:
        if isinstance(mtl, bool) or not isinstance(mtl, (int, float)):
            raise MalformedInput("mtl_atrophy_z must be a number or null")
        mtl = float(mtl)
    return SubjectRecord(diagnosis=diagnosis, mmse=mmse, mtl_atrophy_z=mtl)


def parse_session(data: bytes | bytearray | str | dict) -> DrawingSession:
    """Parse and validate a session file; unknown fields are ignored.

    Raises MalformedInput, RangeViolation, NonMonotonicTime, or EmptySession.
    """
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput(f"not UTF-8: {exc}") from exc
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput("session file must be a JSON object")

    session_id = data.get("session_id")
    if not isinstance(session_id, str) or not session_id:
        raise MalformedInput("session_id missing or not a string")
    subject = _parse_subject(data.get("subject"))

    tasks = data.get("tasks")
    if not tasks:
        raise EmptySession("session contains no task recordings")
    if not isinstance(tasks, list):
        raise MalformedInput("tasks must be an array")

    recordings: dict[str, TaskRecording] = {}
    for entry in tasks:
        if not isinstance(entry, dict):
            raise MalformedInput("task entry must be an object")
        task = entry.get("task")
        if task not in TASKS:
            raise MalformedInput(f"unknown task {task!r}")
        if task in recordings:
            raise MalformedInput(f"duplicate task {task}")
        samples = entry.get("samples")
        if samples is None:
            samples = []
        if not isinstance(samples, list):
            raise MalformedInput(f"{task}: samples must be an array")
        n = len(samples)
        t = np.empty(n); x = np.empty(n); y = np.empty(n)
        p = np.empty(n); tx = np.empty(n); ty = np.empty(n)
        down = np.empty(n, dtype=bool)
        for i, s in enumerate(samples):
            if not isinstance(s, dict):
                raise MalformedInput(f"{task}: sample {i} must be an object")
            ctx = f"{task} sample {i}"
            t[i] = _require_number(s, "t", ctx)
            x[i] = _require_number(s, "x", ctx)
            y[i] = _require_number(s, "y", ctx)
            p[i] = _require_number(s, "p", ctx)
            tx[i] = _require_number(s, "tx", ctx)
            ty[i] = _require_number(s, "ty", ctx)
            d = s.get("d")
            if not isinstance(d, bool):
                raise MalformedInput(f"{ctx}: field 'd' missing or not a boolean")
            down[i] = d
        recordings[task] = recording_from_arrays(task, t, x, y, p, tx, ty, down)

    return DrawingSession(session_id=session_id, subject=subject, recordings=recordings)


def validate_session(session: DrawingSession) -> ValidationReport:
    """Report missing tasks, zero-stroke recordings, and short strokes."""
    missing = tuple(task for task in TASKS if task not in session.recordings)
    zero_strokes = []
    ineligible: dict[str, int] = {}
    for task in TASKS:
        rec = session.recordings.get(task)
        if rec is None:
            continue
        if not rec.strokes:
            zero_strokes.append(task)
        short = sum(1 for s in rec.strokes if not s.derivative_eligible)
        if short:
            ineligible[task] = short
    return ValidationReport(missing, tuple(zero_strokes), ineligible)


def session_to_dict(session: DrawingSession) -> dict:
    subject = None
    if session.subject is not None:
        subject = {
            "diagnosis": session.subject.diagnosis,
            "mmse": session.subject.mmse,
            "mtl_atrophy_z": session.subject.mtl_atrophy_z,
        }
    tasks = []
    for task in TASKS:
        rec = session.recordings.get(task)
        if rec is None:
            continue
        tasks.append({
            "task": task,
            "samples": [
                {
                    "t": float(rec.t[i]), "x": float(rec.x[i]), "y": float(rec.y[i]),
                    "p": float(rec.pressure[i]),
                    "tx": float(rec.tilt_x[i]), "ty": float(rec.tilt_y[i]),
                    "d": bool(rec.pen_down[i]),
                }
                for i in range(rec.n_samples)
            ],
        })
    return {"session_id": session.session_id, "subject": subject, "tasks": tasks}


def session_to_json_bytes(session: DrawingSession) -> bytes:
    """Canonical byte serialization: tasks in fixed order, no whitespace."""
    return json.dumps(session_to_dict(session), separators=(",", ":")).encode("utf-8")
