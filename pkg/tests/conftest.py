"""Shared fixtures: random recordings and a cached synthetic cohort."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from inkscreen.features.extract import extract_session_features
from inkscreen.strokes import recording_from_arrays
from inkscreen.synth import generate_cohort, table1_thetas


def random_recording(seed: int, task: str = "TMT_A"):
    """Small random recording stressing guards: short strokes, plateaus, hovers."""
    rng = np.random.default_rng(seed)
    n_strokes = int(rng.integers(1, 6))
    t_cursor = float(rng.integers(0, 50))
    cols = {k: [] for k in ("t", "x", "y", "p", "tx", "ty", "d")}
    for si in range(n_strokes):
        n = int(rng.integers(1, 40))
        for _ in range(n):
            t_cursor += float(rng.integers(2, 30))
            cols["t"].append(t_cursor)
            # quantized positions produce plateaus and exact ties
            cols["x"].append(float(np.round(rng.normal(50, 20) * 4) / 4))
            cols["y"].append(float(np.round(rng.normal(50, 20) * 4) / 4))
            cols["p"].append(float(np.round(rng.uniform(0.1, 1.0) * 64) / 64))
            cols["tx"].append(float(np.round(rng.uniform(-45, 45) * 8) / 8))
            cols["ty"].append(float(np.round(rng.uniform(-45, 45) * 8) / 8))
            cols["d"].append(True)
        if si + 1 < n_strokes:
            for _ in range(int(rng.integers(1, 3))):
                t_cursor += float(rng.integers(30, 400))
                cols["t"].append(t_cursor)
                cols["x"].append(float(rng.normal(50, 20)))
                cols["y"].append(float(rng.normal(50, 20)))
                cols["p"].append(0.0)
                cols["tx"].append(0.0)
                cols["ty"].append(0.0)
                cols["d"].append(False)
    return recording_from_arrays(
        task,
        np.array(cols["t"]), np.array(cols["x"]), np.array(cols["y"]),
        np.array(cols["p"]), np.array(cols["tx"]), np.array(cols["ty"]),
        np.array(cols["d"], dtype=bool),
    )


@lru_cache(maxsize=1)
def table1_cohort():
    """The 46/67/32 synthetic cohort plus its feature matrix and labels."""
    sessions = generate_cohort(thetas=table1_thetas(0), seed=0)
    X = np.vstack([extract_session_features(s).values for s in sessions])
    diagnosis = np.array(
        [("CN", "MCI", "DEMENTIA").index(s.subject.diagnosis) for s in sessions],
        dtype=np.int64,
    )
    mmse = np.array([float(s.subject.mmse) for s in sessions])
    mtl = np.array([s.subject.mtl_atrophy_z for s in sessions])
    return sessions, X, diagnosis, mmse, mtl


@pytest.fixture(scope="session")
def cohort():
    return table1_cohort()
