#!/usr/bin/env python3
"""Train a small synthetic-cohort bundle for the webapp integration tests."""

import sys

import numpy as np

from inkscreen.bundle import save_bundle, train_bundle
from inkscreen.evaluation.engine import reduced_grid
from inkscreen.features.extract import extract_session_features
from inkscreen.synth import generate_cohort, table1_thetas


def main(out_path: str) -> None:
    sessions = generate_cohort(thetas=table1_thetas(3, (5, 5, 5)), seed=3)
    X = np.vstack([extract_session_features(s).values for s in sessions])
    targets = {
        "diagnosis": np.array([s.subject.diagnosis for s in sessions], dtype=object),
        "mmse": np.array([float(s.subject.mmse) for s in sessions]),
        "mtl": np.array([s.subject.mtl_atrophy_z for s in sessions]),
    }
    bundle = train_bundle(X, targets, seed=1, grid=reduced_grid(), inner_k=3, n_trees=15)
    save_bundle(bundle, out_path)
    print(f"bundle written: {out_path} targets={list(bundle.targets)}")


if __name__ == "__main__":
    main(sys.argv[1])
