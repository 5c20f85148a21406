"""Deterministic seeded k-fold assignment, stratified per task type.

Classification strata are the classes themselves; regression targets are
binned into quintiles first. Within each stratum, members are shuffled and
dealt round-robin starting at a random fold offset, so per-stratum fold
counts differ by at most one.
"""

from __future__ import annotations

import numpy as np

from ..errors import TooFewPerClass
from ..util import rng_for

REGRESSION_BINS = 5


def _deal(strata: list[np.ndarray], n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    folds = np.empty(n, dtype=np.int64)
    for members in strata:
        members = rng.permutation(members)
        offset = int(rng.integers(k))
        for i, idx in enumerate(members):
            folds[idx] = (i + offset) % k
    return folds


def stratified_kfold(y, k: int, seed: int, task: str = "classification") -> np.ndarray:
    """Return a fold id in [0, k) per sample."""
    y = np.asarray(y)
    n = y.shape[0]
    if n < k:
        raise TooFewPerClass(f"{n} samples cannot fill {k} folds")
    rng = rng_for(seed, "kfold")
    if task == "classification":
        classes, counts = np.unique(y, return_counts=True)
        short = classes[counts < k]
        if short.size:
            raise TooFewPerClass(
                f"class {short[0]!r} has {int(counts[counts < k][0])} members, need >= {k}"
            )
        strata = [np.flatnonzero(y == cls) for cls in classes]
    else:
        yv = y.astype(np.float64)
        edges = np.quantile(yv, np.linspace(0, 1, REGRESSION_BINS + 1)[1:-1])
        bins = np.searchsorted(edges, yv, side="left")
        strata = [np.flatnonzero(bins == b) for b in np.unique(bins)]
    folds = _deal(strata, n, k, rng)
    # tiny strata can leave a fold empty; rebalance deterministically
    counts = np.bincount(folds, minlength=k)
    while counts.min() == 0:
        src = int(np.argmax(counts))
        dst = int(np.argmin(counts))
        folds[np.flatnonzero(folds == src)[0]] = dst
        counts = np.bincount(folds, minlength=k)
    return folds
