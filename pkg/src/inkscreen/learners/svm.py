"""Soft-margin SVM solved by sequential minimal optimization.

Binary only; multiclass is handled one-vs-rest by SVMOvR. Each iteration
performs a two-variable update on the maximal KKT-violating pair (working-set
selection on the bias-free gradient), stopping when the violation gap falls
below the KKT tolerance or after max_iter pair updates; the bias is the
midpoint of the feasible interval at the solution. Per-sample box constraints
0 <= alpha_i <= C * s_i carry the class weights (normalized to mean 1, so
only relative weights matter). Decision scores are raw, uncalibrated values;
AUC is rank-based so no probability calibration is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._accel import NUMBA_ENABLED, njit
from ..errors import BadC, BadGamma, BadKernel, NonFinite, ShapeMismatch, SingleClass

DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITER = 100_000


def kernel_matrix(A: np.ndarray, B: np.ndarray, kernel: str, gamma: float) -> np.ndarray:
    if kernel == "linear":
        return A @ B.T
    d2 = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


@njit(cache=True)
def _smo_solve(K, y, U, tol, max_iter):
    # G_k = sum_t alpha_t y_t K_tk - y_k: the decision value without bias,
    # minus the target. The most-violating pair is (argmin G over the "up"
    # set, argmax G over the "down" set); the gap bounds the KKT violation.
    n = K.shape[0]
    alpha = np.zeros(n)
    G = np.empty(n)
    for k in range(n):
        G[k] = -y[k]
    it = 0
    while it < max_iter:
        i = -1
        j = -1
        gmin = np.inf
        gmax = -np.inf
        for k in range(n):
            eps = 1e-8 * (1.0 + U[k])
            up = (y[k] > 0 and alpha[k] < U[k] - eps) or (y[k] < 0 and alpha[k] > eps)
            dn = (y[k] < 0 and alpha[k] < U[k] - eps) or (y[k] > 0 and alpha[k] > eps)
            if up and G[k] < gmin:
                gmin = G[k]
                i = k
            if dn and G[k] > gmax:
                gmax = G[k]
                j = k
        if i < 0 or j < 0 or gmax - gmin <= tol:
            break
        ai, aj = alpha[i], alpha[j]
        yi, yj = y[i], y[j]
        if yi != yj:
            L = max(0.0, aj - ai)
            H = min(U[j], U[i] + aj - ai)
        else:
            L = max(0.0, ai + aj - U[i])
            H = min(U[j], ai + aj)
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= 1e-12:
            eta = 1e-12
        ajn = aj + yj * (G[i] - G[j]) / eta
        if ajn < L:
            ajn = L
        elif ajn > H:
            ajn = H
        if abs(ajn - aj) < 1e-12:
            break
        ain = ai + yi * yj * (aj - ajn)
        if ain < 0.0:
            ain = 0.0
        elif ain > U[i]:
            ain = U[i]
        dai = ain - ai
        daj = ajn - aj
        alpha[i] = ain
        alpha[j] = ajn
        for k in range(n):
            G[k] += yi * dai * K[i, k] + yj * daj * K[j, k]
        it += 1

    # bias: midpoint of the feasible interval [-max_dn G, -min_up G]
    gmin = np.inf
    gmax = -np.inf
    for k in range(n):
        eps = 1e-8 * (1.0 + U[k])
        up = (y[k] > 0 and alpha[k] < U[k] - eps) or (y[k] < 0 and alpha[k] > eps)
        dn = (y[k] < 0 and alpha[k] < U[k] - eps) or (y[k] > 0 and alpha[k] > eps)
        if up and G[k] < gmin:
            gmin = G[k]
        if dn and G[k] > gmax:
            gmax = G[k]
    if np.isinf(gmin) and np.isinf(gmax):
        b = 0.0
    elif np.isinf(gmin):
        b = -gmax
    elif np.isinf(gmax):
        b = -gmin
    else:
        b = -0.5 * (gmin + gmax)
    return alpha, b, it


def _smo_solve_numpy(K, y, U, tol, max_iter):
    n = K.shape[0]
    alpha = np.zeros(n)
    G = -y.astype(np.float64).copy()
    it = 0
    eps = 1e-8 * (1.0 + U)
    while it < max_iter:
        pos = y > 0
        up = (pos & (alpha < U - eps)) | (~pos & (alpha > eps))
        dn = (~pos & (alpha < U - eps)) | (pos & (alpha > eps))
        if not up.any() or not dn.any():
            break
        gu = np.where(up, G, np.inf)
        gd = np.where(dn, G, -np.inf)
        i = int(np.argmin(gu))
        j = int(np.argmax(gd))
        if gd[j] - gu[i] <= tol:
            break
        ai, aj = alpha[i], alpha[j]
        yi, yj = y[i], y[j]
        if yi != yj:
            L, H = max(0.0, aj - ai), min(U[j], U[i] + aj - ai)
        else:
            L, H = max(0.0, ai + aj - U[i]), min(U[j], ai + aj)
        eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
        ajn = min(max(aj + yj * (G[i] - G[j]) / eta, L), H)
        if abs(ajn - aj) < 1e-12:
            break
        ain = min(max(ai + yi * yj * (aj - ajn), 0.0), U[i])
        dai, daj = ain - ai, ajn - aj
        alpha[i], alpha[j] = ain, ajn
        G += yi * dai * K[i] + yj * daj * K[j]
        it += 1

    pos = y > 0
    up = (pos & (alpha < U - eps)) | (~pos & (alpha > eps))
    dn = (~pos & (alpha < U - eps)) | (pos & (alpha > eps))
    gmin = float(np.min(np.where(up, G, np.inf)))
    gmax = float(np.max(np.where(dn, G, -np.inf)))
    if np.isinf(gmin) and np.isinf(gmax):
        b = 0.0
    elif np.isinf(gmin):
        b = -gmax
    elif np.isinf(gmax):
        b = -gmin
    else:
        b = -0.5 * (gmin + gmax)
    return alpha, b, it


@dataclass
class SVMModel:
    kernel: str
    C: float
    gamma: float
    classes_: np.ndarray
    sv_X: np.ndarray
    sv_coef: np.ndarray  # alpha_i * y_i for support rows
    bias: float
    # full-problem diagnostics, not serialized
    alpha_: np.ndarray | None = None
    y_: np.ndarray | None = None
    box_: np.ndarray | None = None
    iterations_: int = 0

    @property
    def n_features(self) -> int:
        return int(self.sv_X.shape[1])

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_features:
            raise ShapeMismatch(f"X has {X.shape[1]} features, model has {self.n_features}")
        if self.sv_X.shape[0] == 0:
            return np.full(X.shape[0], self.bias)
        return kernel_matrix(X, self.sv_X, self.kernel, self.gamma) @ self.sv_coef + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes_[(self.decision_function(X) > 0).astype(np.int64)]

    def to_state(self) -> dict:
        return {
            "kernel": self.kernel,
            "C": self.C,
            "gamma": self.gamma,
            "classes": self.classes_.tolist(),
            "sv_X": self.sv_X.tolist(),
            "sv_coef": self.sv_coef.tolist(),
            "bias": self.bias,
        }

    @classmethod
    def from_state(cls, state: dict) -> "SVMModel":
        return cls(
            kernel=state["kernel"],
            C=state["C"],
            gamma=state["gamma"],
            classes_=np.asarray(state["classes"]),
            sv_X=np.asarray(state["sv_X"], dtype=np.float64).reshape(len(state["sv_X"]), -1),
            sv_coef=np.asarray(state["sv_coef"], dtype=np.float64),
            bias=float(state["bias"]),
        )


def fit_svm(
    X: np.ndarray,
    y: np.ndarray,
    kernel: str = "linear",
    C: float = 1.0,
    gamma: float = 0.1,
    sample_weight: np.ndarray | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SVMModel:
    """Fit a binary class-weighted soft-margin SVM."""
    if kernel not in ("linear", "rbf"):
        raise BadKernel(f"kernel must be 'linear' or 'rbf', got {kernel!r}")
    if C <= 0:
        raise BadC(f"C must be positive, got {C}")
    if kernel == "rbf" and gamma <= 0:
        raise BadGamma(f"gamma must be positive, got {gamma}")
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or y.shape[0] != X.shape[0]:
        raise ShapeMismatch(f"X shape {X.shape} does not match y shape {y.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFinite("training data contains non-finite values")
    classes = np.unique(y)
    if classes.shape[0] != 2:
        raise SingleClass(f"need exactly 2 classes, got {classes.shape[0]}")
    ysign = np.where(y == classes[1], 1.0, -1.0)

    n = X.shape[0]
    s = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    s = s * (n / s.sum())
    U = np.ascontiguousarray(C * s)

    K = np.ascontiguousarray(kernel_matrix(X, X, kernel, gamma))
    solver = _smo_solve if NUMBA_ENABLED else _smo_solve_numpy
    alpha, b, iterations = solver(K, np.ascontiguousarray(ysign), U, tol, max_iter)

    sv = alpha > 1e-10
    return SVMModel(
        kernel=kernel, C=C, gamma=gamma, classes_=classes,
        sv_X=X[sv].copy(), sv_coef=(alpha * ysign)[sv], bias=float(b),
        alpha_=alpha, y_=ysign, box_=U, iterations_=iterations,
    )


@dataclass
class SVMOvR:
    """One-vs-rest wrapper; the caller-side multiclass composition."""

    classes_: np.ndarray
    models: list[SVMModel]

    def decision_matrix(self, X: np.ndarray) -> np.ndarray:
        return np.column_stack([m.decision_function(X) for m in self.models])

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes_[np.argmax(self.decision_matrix(X), axis=1)]

    def to_state(self) -> dict:
        return {
            "classes": self.classes_.tolist(),
            "models": [m.to_state() for m in self.models],
        }

    @classmethod
    def from_state(cls, state: dict) -> "SVMOvR":
        return cls(
            classes_=np.asarray(state["classes"]),
            models=[SVMModel.from_state(m) for m in state["models"]],
        )


def fit_svm_ovr(
    X: np.ndarray,
    y: np.ndarray,
    kernel: str = "linear",
    C: float = 1.0,
    gamma: float = 0.1,
    sample_weight: np.ndarray | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SVMOvR:
    classes = np.unique(y)
    if classes.shape[0] < 2:
        raise SingleClass("need at least 2 classes")
    models = []
    for cls in classes:
        y_bin = np.where(y == cls, 1, 0)
        models.append(
            fit_svm(X, y_bin, kernel=kernel, C=C, gamma=gamma,
                    sample_weight=sample_weight, tol=tol, max_iter=max_iter)
        )
    return SVMOvR(classes_=classes, models=models)
