"""Feature extraction: worked examples, census, and structural invariances."""

import numpy as np
import pytest

from inkscreen.errors import EvenWindow, TooShort
from inkscreen.features.extract import extract_session_features, extract_task_features
from inkscreen.features.kinematics import differentiate, kinematic_series, smooth
from inkscreen.features.registry import (
    FEATURE_NAMES,
    KINEMATIC_FEATURES,
    PAUSE_FEATURES,
    POSTURE_FEATURES,
    PRESSURE_FEATURES,
    SESSION_COLUMNS,
)
from inkscreen.features.stats import count_local_extrema, cv, pooled_median
from inkscreen.features.tables import read_features_csv, write_features_csv
from inkscreen.strokes import DrawingSession, parse_session, recording_from_arrays
from inkscreen.synth import CohortSpec, generate_session

from .conftest import random_recording


def make_stroke_recording(task="CDT", xs=None, ys=None, ts=None, p=None, tx=None, ty=None):
    n = len(xs)
    return recording_from_arrays(
        task,
        np.asarray(ts, float),
        np.asarray(xs, float),
        np.asarray(ys if ys is not None else [0.0] * n, float),
        np.asarray(p if p is not None else [0.5] * n, float),
        np.asarray(tx if tx is not None else [0.0] * n, float),
        np.asarray(ty if ty is not None else [0.0] * n, float),
        np.ones(n, dtype=bool),
    )


# -- smoothing / differentiation ------------------------------------------------


def test_smooth_window_one_is_identity():
    x = np.array([3.0, 1.0, 4.0, 1.0, 5.0])
    assert np.array_equal(smooth(x, 1), x)


def test_smooth_boundary_shrink():
    out = smooth(np.array([0.0, 3.0, 0.0]), 3)
    assert out == pytest.approx([1.5, 1.0, 1.5], abs=1e-15)


def test_smooth_constant_unchanged():
    x = np.full(9, 2.5)
    assert smooth(x, 5) == pytest.approx([2.5] * 9, abs=0)


def test_smooth_even_window_rejected():
    with pytest.raises(EvenWindow):
        smooth(np.arange(4.0), 2)


def test_differentiate_straight_line():
    pos = np.array([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]])
    t = np.array([0.0, 0.1, 0.2])
    v = differentiate(pos, t)
    speed = np.hypot(v[:, 0], v[:, 1])
    assert speed == pytest.approx([50.0, 50.0, 50.0], rel=1e-12)


def test_differentiate_constant_zero():
    d = differentiate(np.full(6, 7.0), np.linspace(0, 1, 6))
    assert np.all(d == 0)


def test_differentiate_too_short():
    with pytest.raises(TooShort):
        differentiate(np.array([1.0, 2.0]), np.array([0.0, 1.0]))


def test_kinematics_uniform_motion():
    n = 24
    ts = np.arange(n) * 10.0
    rec = make_stroke_recording(xs=np.arange(n) * 2.0, ts=ts)
    # window 1: the difference scheme is exact on affine input everywhere
    k1 = kinematic_series(rec.strokes[0], window=1)
    assert k1.speed == pytest.approx([200.0] * n, rel=1e-12)  # 2 mm / 10 ms
    assert np.max(np.abs(k1.accel)) < 1e-7
    assert np.max(np.abs(k1.jerk)) < 1e-5
    # default window: boundary truncation only perturbs the stroke edges
    k5 = kinematic_series(rec.strokes[0])
    inner = slice(8, n - 8)
    assert k5.speed[inner] == pytest.approx([200.0] * (n - 16), rel=1e-9)
    assert np.max(np.abs(k5.accel[inner])) < 1e-7
    assert np.max(np.abs(k5.jerk[inner])) < 1e-5


def test_kinematics_stationary():
    rec = make_stroke_recording(xs=[5.0] * 8, ts=np.arange(8) * 10.0)
    k = kinematic_series(rec.strokes[0])
    assert np.all(k.speed == 0)


# -- statistics ------------------------------------------------------------------


def test_pooled_median_rules():
    assert pooled_median([np.array([1.0, 2.0, 3.0])]) == 2.0
    assert pooled_median([np.array([1.0, 2.0]), np.array([3.0, 4.0])]) == 2.5
    assert np.isnan(pooled_median([]))


def test_cv_examples():
    assert cv(np.array([2.0, 2.0, 2.0])) == 0.0
    assert cv(np.array([1.0, 3.0])) == pytest.approx(0.70711, abs=5e-6)
    assert np.isnan(cv(np.array([-1.0, 1.0])))
    assert np.isnan(cv(np.array([5.0])))


def test_extrema_examples():
    assert count_local_extrema(np.array([1.0, 3.0, 2.0, 4.0, 1.0])) == 3
    assert count_local_extrema(np.array([1.0, 2.0, 3.0, 4.0])) == 0
    assert count_local_extrema(np.array([1.0, 2.0, 2.0, 1.0])) == 1
    assert count_local_extrema(np.array([1.0, 2.0])) == 0
    assert count_local_extrema(np.array([1.0, 2.0, 2.0, 3.0])) == 0


# -- per-task assembly -------------------------------------------------------------


def test_census():
    assert len(FEATURE_NAMES) == 38
    assert len(KINEMATIC_FEATURES) == 15
    assert len(PRESSURE_FEATURES) == 8
    assert len(POSTURE_FEATURES) == 10
    assert len(PAUSE_FEATURES) == 5
    assert len(SESSION_COLUMNS) == 190
    assert SESSION_COLUMNS[0] == "SENTENCE.speed_median"


def test_zero_stroke_recording_all_missing():
    rec = recording_from_arrays(
        "CDT", np.array([]), np.array([]), np.array([]), np.array([]),
        np.array([]), np.array([]), np.array([], dtype=bool),
    )
    tf = extract_task_features(rec)
    assert tf.missing.all()


def test_pause_feature_worked_example():
    # two 1.0 s strokes, one 0.5 s pause, total path 100 mm
    ts1 = np.linspace(0, 1000, 11)
    ts2 = np.linspace(1500, 2500, 11)
    xs1 = np.linspace(0, 50, 11)
    xs2 = np.linspace(50, 100, 11)
    t = np.concatenate([ts1, [1200.0], ts2])
    x = np.concatenate([xs1, [50.0], xs2])
    down = np.ones(23, dtype=bool)
    down[11] = False
    p = np.full(23, 0.5)
    p[11] = 0.0
    rec = recording_from_arrays(
        "CDT", t, x, np.zeros(23), p, np.zeros(23), np.zeros(23), down
    )
    tf = extract_task_features(rec)
    assert tf.value("pause_mean") == pytest.approx(0.5, abs=1e-12)
    assert tf.value("pause_cv") == 0.0
    assert tf.value("n_drawings") == 2.0
    assert tf.value("pause_drawing_ratio") == pytest.approx(0.25, abs=1e-12)
    assert tf.value("adjusted_total_duration") == pytest.approx(0.025, abs=1e-12)


def test_single_stroke_policies():
    rec = make_stroke_recording(xs=np.arange(10.0), ts=np.arange(10.0) * 10,
                                tx=np.linspace(0, 9, 10))
    tf = extract_task_features(rec)
    assert tf.value("pause_mean") == 0.0
    assert tf.value("pause_cv") == 0.0
    assert tf.value("n_drawings") == 1.0
    assert tf.value("pause_drawing_ratio") == 0.0
    # across-stroke statistics need two strokes
    assert tf.is_missing("speed_cv_across")
    assert tf.is_missing("tilt_x_sd_across")
    assert not tf.is_missing("speed_median")


def test_posture_two_constant_tilt_strokes():
    t = np.concatenate([np.arange(5) * 10.0, [60.0], 80 + np.arange(5) * 10.0])
    x = np.arange(11.0)
    down = np.ones(11, dtype=bool)
    down[5] = False
    tx = np.concatenate([np.full(5, 10.0), [0.0], np.full(5, 30.0)])
    p = np.full(11, 0.5)
    p[5] = 0.0
    rec = recording_from_arrays("CDT", t, x, np.zeros(11), p, tx, np.zeros(11), down)
    tf = extract_task_features(rec)
    assert tf.value("tilt_x_sd_across") == pytest.approx(np.sqrt(200.0), abs=1e-9)
    assert tf.value("tilt_x_sd_within") == 0.0
    assert tf.value("tilt_x_rate_abs_median") == 0.0


def test_session_vector_shapes_and_masking():
    session = generate_session(CohortSpec(theta=0.4), seed=5)
    vec = extract_session_features(session)
    assert vec.values.shape == (190,)
    assert list(vec.columns) == list(SESSION_COLUMNS)

    only_tmt = DrawingSession("one", None, {"TMT_A": session.recordings["TMT_A"]})
    vec1 = extract_session_features(only_tmt)
    block = slice(2 * 38, 3 * 38)
    assert not vec1.missing[block].all()
    outside = np.ones(190, dtype=bool)
    outside[block] = False
    assert vec1.missing[outside].all()


def test_feature_csv_roundtrip(tmp_path):
    rec = random_recording(3)
    session = DrawingSession("abc", None, {"TMT_A": rec})
    vec = extract_session_features(session)
    path = tmp_path / "features.csv"
    write_features_csv(path, [vec])
    ids, X = read_features_csv(path)
    assert ids == ["abc"]
    assert np.array_equal(np.isnan(X[0]), vec.missing)
    present = ~vec.missing
    assert np.array_equal(X[0][present], vec.values[present])


def test_extraction_deterministic():
    session = generate_session(CohortSpec(theta=0.3), seed=21)
    a = extract_session_features(session)
    b = extract_session_features(session)
    assert np.array_equal(a.values, b.values, equal_nan=True)
