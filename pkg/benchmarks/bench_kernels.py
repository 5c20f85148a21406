#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run `python benchmarks/bench_kernels.py` with numba installed; the script
times both implementations of each hot kernel directly (the fallback is the
path selected by INKSCREEN_DISABLE_NUMBA=1 at import time).
"""

import time

import numpy as np

from inkscreen._accel import NUMBA_ENABLED
from inkscreen.features.stats import _count_extrema_loop, _count_extrema_numpy
from inkscreen.learners.elastic_net import (
    _cd_linear,
    _cd_linear_numpy,
    _cd_logistic,
    _cd_logistic_numpy,
)
from inkscreen.learners.forest import (
    _best_split_cls,
    _best_split_cls_numpy,
    _best_split_reg,
    _best_split_reg_numpy,
)
from inkscreen.learners.svm import _smo_solve, _smo_solve_numpy, kernel_matrix


def timeit(fn, *args, repeat=5):
    best = np.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, njit_fn, numpy_fn, make_args):
    args = make_args()
    njit_fn(*make_args())  # trigger compilation outside the timed region
    t_nb, _ = timeit(njit_fn, *args)
    args = make_args()
    t_np, _ = timeit(numpy_fn, *args)
    print(f"{name:<28} numba {t_nb * 1e3:9.3f} ms   numpy {t_np * 1e3:9.3f} ms   "
          f"speedup {t_np / t_nb:6.1f}x")


def main():
    rng = np.random.default_rng(0)
    print(f"numba enabled: {NUMBA_ENABLED}\n")

    n, p = 300, 190
    X = np.ascontiguousarray(rng.normal(size=(n, p)))
    y_lin = X[:, 0] - X[:, 5] + 0.3 * rng.normal(size=n)
    y_log = (X[:, 0] + 0.5 * rng.normal(size=n) > 0).astype(np.float64)
    s = np.ones(n)

    bench("elastic net CD (linear)", _cd_linear, _cd_linear_numpy,
          lambda: (X, y_lin, s, np.zeros(p), 1e-4, 1e-4, 1e-6, 400))
    bench("elastic net CD (logistic)", _cd_logistic, _cd_logistic_numpy,
          lambda: (X, y_log, s, np.zeros(p), 1e-4, 1e-4, 1e-6, 400))

    m = 220
    Xs = rng.normal(size=(m, 12))
    ys = np.where(Xs[:, 0] + 0.8 * rng.normal(size=m) > 0, 1.0, -1.0)
    K = np.ascontiguousarray(kernel_matrix(Xs, Xs, "rbf", 0.05))
    U = np.full(m, 50.0)
    bench("SMO solve (rbf, n=220)", _smo_solve, _smo_solve_numpy,
          lambda: (K, ys.copy(), U, 1e-3, 100_000))

    ns = 400
    Xc = np.ascontiguousarray(rng.normal(size=(ns, 5)))
    yi = np.ascontiguousarray(rng.integers(0, 3, ns).astype(np.int64))
    w = np.ascontiguousarray(rng.uniform(0.5, 2.0, ns))
    bench("tree split scan (gini)", _best_split_cls, _best_split_cls_numpy,
          lambda: (Xc, yi, w, 3))
    yv = np.ascontiguousarray(rng.normal(size=ns))
    bench("tree split scan (variance)", _best_split_reg, _best_split_reg_numpy,
          lambda: (Xc, yv, w))

    series = np.ascontiguousarray(np.round(rng.normal(size=20_000), 2))
    bench("local extrema count", _count_extrema_loop, _count_extrema_numpy,
          lambda: (series,))


if __name__ == "__main__":
    main()
