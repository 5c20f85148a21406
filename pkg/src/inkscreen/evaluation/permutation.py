"""Permutation significance test: rerun the whole protocol on shuffled targets.

p = (1 + #{null >= observed}) / (1 + n_perm); performance is significant at
0.05 when the observed value beats at least 95% of the permuted runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BadPermCount
from ..util import rng_for
from .engine import CVResult, nested_cv


@dataclass
class PermutationResult:
    observed: float
    null_distribution: np.ndarray
    p_value: float
    n_perm: int
    headline_metric: str
    observed_result: CVResult

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "headline_metric": self.headline_metric,
            "observed": self.observed,
            "null_distribution": self.null_distribution.tolist(),
            "p_value": self.p_value,
            "n_perm": self.n_perm,
            "observed_report": self.observed_result.to_dict(),
        }


def permutation_pvalue(observed: float, null: np.ndarray) -> float:
    null = np.asarray(null, dtype=np.float64)
    return float((1 + np.count_nonzero(null >= observed)) / (1 + null.shape[0]))


def permutation_test(
    X: np.ndarray,
    y: np.ndarray,
    task: str,
    n_perm: int = 100,
    seed: int = 0,
    **cv_kwargs,
) -> PermutationResult:
    """Build a null distribution by rerunning nested_cv on permuted targets."""
    if n_perm < 1:
        raise BadPermCount(f"n_perm must be >= 1, got {n_perm}")
    observed_result = nested_cv(X, y, task, seed=seed, **cv_kwargs)
    observed = observed_result.headline
    null = np.empty(n_perm)
    for p in range(n_perm):
        yp = rng_for(seed, "perm", p).permutation(np.asarray(y))
        null[p] = nested_cv(X, yp, task, seed=seed, **cv_kwargs).headline
    return PermutationResult(
        observed=observed,
        null_distribution=null,
        p_value=permutation_pvalue(observed, null),
        n_perm=n_perm,
        headline_metric=observed_result.headline_metric,
        observed_result=observed_result,
    )
