"""Synthetic cohort generator: determinism, validity, effect directions."""

import numpy as np
import pytest

from inkscreen.errors import BadSpec
from inkscreen.features.extract import extract_session_features
from inkscreen.strokes import parse_session, session_to_json_bytes, validate_session
from inkscreen.synth import (
    CohortSpec,
    generate_cohort,
    generate_session,
    label_model,
    table1_thetas,
)
from inkscreen.util import rng_for


def test_byte_determinism():
    spec = CohortSpec(theta=0.4)
    a = session_to_json_bytes(generate_session(spec, seed=7))
    b = session_to_json_bytes(generate_session(spec, seed=7))
    assert a == b
    c = session_to_json_bytes(generate_session(spec, seed=8))
    assert a != c


def test_generated_sessions_parse_clean():
    for theta in (0.0, 0.5, 1.0):
        session = generate_session(CohortSpec(theta=theta), seed=3)
        parsed = parse_session(session_to_json_bytes(session))
        report = validate_session(parsed)
        assert report.is_clean, report.to_dict()
        assert set(parsed.recordings) == {"SENTENCE", "PENTAGON", "TMT_A", "TMT_B", "CDT"}


def test_effect_directions_sign_test():
    # paired sign test over seeds: 11+/12 agreements gives one-sided p < 0.01
    pause_up = 0
    speed_down = 0
    n = 12
    for k in range(n):
        v0 = extract_session_features(generate_session(CohortSpec(theta=0.0), seed=500 + k))
        v1 = extract_session_features(generate_session(CohortSpec(theta=1.0), seed=500 + k))
        pause_up += v1.value("PENTAGON.pause_mean") > v0.value("PENTAGON.pause_mean")
        speed_down += v1.value("PENTAGON.speed_median") < v0.value("PENTAGON.speed_median")
    assert pause_up >= 11
    assert speed_down >= 11


def test_label_model():
    rng = rng_for(0, "t")
    for theta, expected in ((0.1, "CN"), (0.5, "MCI"), (0.9, "DEMENTIA")):
        rec = label_model(theta, rng)
        assert rec.diagnosis == expected
        assert 0 <= rec.mmse <= 30
    highs = [label_model(1.0, rng_for(1, i)).mmse for i in range(50)]
    lows = [label_model(0.0, rng_for(1, i)).mmse for i in range(50)]
    assert np.mean(lows) > np.mean(highs)
    assert max(lows) <= 30


def test_table1_counts():
    thetas = table1_thetas(0)
    assert thetas.shape == (145,)
    sessions = generate_cohort(thetas=thetas[:6].tolist() + [0.5] * 0, seed=1)
    assert len(sessions) == 6
    diag = [label_model(t, rng_for(9, i)).diagnosis for i, t in enumerate(thetas)]
    counts = {d: diag.count(d) for d in ("CN", "MCI", "DEMENTIA")}
    assert counts == {"CN": 46, "MCI": 67, "DEMENTIA": 32}


def test_bad_spec():
    with pytest.raises(BadSpec):
        generate_session(CohortSpec(theta=1.5), seed=0)
    with pytest.raises(BadSpec):
        generate_session(CohortSpec(sampling_hz=0.0), seed=0)
    with pytest.raises(BadSpec):
        generate_cohort(n=0, seed=0)
