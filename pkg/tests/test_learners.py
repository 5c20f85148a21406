"""Solvers and preprocessing: oracles, KKT checks, determinism, weights."""

import numpy as np
import pytest

from inkscreen.errors import (
    BadAlpha,
    BadC,
    BadDepth,
    BadGamma,
    BadKernel,
    BadMaxFeatures,
    NonFinite,
    NoRows,
    ShapeMismatch,
    SingleClass,
)
from inkscreen.learners.elastic_net import ElasticNetGLM, fit_elastic_net, l1_select_features
from inkscreen.learners.forest import fit_random_forest
from inkscreen.learners.preprocess import (
    apply_preprocessor,
    balanced_class_weights,
    fit_preprocessor,
    sample_weights,
)
from inkscreen.learners.svm import fit_svm, fit_svm_ovr, kernel_matrix


# -- preprocessing ---------------------------------------------------------------


def test_preprocessor_standardizes():
    X = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
    pp = fit_preprocessor(X)
    Z = apply_preprocessor(pp, X)
    assert Z[:, 0] @ np.ones(3) == pytest.approx(0.0, abs=1e-12)
    assert Z[:, 0].std(ddof=0) == pytest.approx(1.0, abs=1e-12)
    # test value equal to the training mean standardizes to zero
    assert apply_preprocessor(pp, np.array([[2.0, 5.0]]))[0, 0] == pytest.approx(0.0, abs=1e-12)
    # constant column guard
    assert np.all(Z[:, 1] == 0.0)


def test_preprocessor_imputes_median():
    X = np.array([[1.0], [np.nan], [3.0]])
    pp = fit_preprocessor(X)
    assert pp.medians[0] == 2.0
    Z = apply_preprocessor(pp, np.array([[np.nan]]))
    # imputed to the (training) median, which is also the training mean here
    assert Z[0, 0] == pytest.approx(0.0, abs=1e-12)


def test_preprocessor_needs_rows():
    with pytest.raises(NoRows):
        fit_preprocessor(np.array([[1.0, 2.0]]))


def test_balanced_class_weights():
    w = balanced_class_weights(np.array([0, 0, 0, 1]))
    assert w[0] == pytest.approx(4 / 6)
    assert w[1] == pytest.approx(2.0)
    assert balanced_class_weights(np.array([0, 0, 1, 1])) == {0: 1.0, 1: 1.0}
    w3 = balanced_class_weights(np.array([0, 0, 1, 1, 2, 2]))
    assert all(v == 1.0 for v in w3.values())


# -- elastic net ------------------------------------------------------------------


def _fd_smooth_gradient(X, y, s, w, b, task, lam2, h=1e-6):
    """Finite-difference gradient of the smooth objective part (loss + L2)."""

    def smooth_obj(wv):
        z = X @ wv + b
        if task == "logistic":
            loss = np.where(z > 0, z, 0.0) + np.log1p(np.exp(-np.abs(z))) - y * z
        else:
            loss = (y - z) ** 2
        return float((s * loss).sum() / X.shape[0] + 0.5 * lam2 * (wv @ wv))

    g = np.zeros_like(w)
    for j in range(w.shape[0]):
        wp, wm = w.copy(), w.copy()
        wp[j] += h
        wm[j] -= h
        g[j] = (smooth_obj(wp) - smooth_obj(wm)) / (2 * h)
    return g


def subgradient_violation(model: ElasticNetGLM, X, y, s, class_index=0):
    n = X.shape[0]
    lam1 = model.alpha / (model.C * n)
    lam2 = (1.0 - model.alpha) / (model.C * n)
    w = model.coef_[class_index]
    b = model.intercept_[class_index]
    if model.task == "logistic":
        target = (y == model.classes_[-1]).astype(float) if model.classes_ is not None else y
        if model.classes_ is not None and model.classes_.shape[0] > 2:
            target = (y == model.classes_[class_index]).astype(float)
    else:
        target = y.astype(float)
    g = _fd_smooth_gradient(X, target, s, w, b, model.task, lam2)
    viol = 0.0
    for j in range(w.shape[0]):
        if w[j] != 0.0:
            viol = max(viol, abs(g[j] + lam1 * np.sign(w[j])))
        else:
            viol = max(viol, max(0.0, abs(g[j]) - lam1))
    return viol


def test_validation_errors():
    X = np.zeros((4, 2))
    y = np.array([0, 1, 0, 1])
    with pytest.raises(BadAlpha):
        fit_elastic_net(X, y, alpha=1.5)
    with pytest.raises(BadC):
        fit_elastic_net(X, y, C=0.0)
    with pytest.raises(NonFinite):
        fit_elastic_net(np.array([[np.nan, 0], [0, 0]]), np.array([0, 1]))


def test_penalty_dominated_limit():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(40, 5))
    y = np.array([0] * 30 + [1] * 10)
    s = sample_weights(y, balanced_class_weights(y))
    m = fit_elastic_net(X, y, task="logistic", alpha=0.5, C=1e-9, sample_weight=s)
    assert np.all(m.coef_ == 0.0)
    # balanced weights make the weighted base rate 1/2, so the intercept is 0
    assert m.intercept_[0] == pytest.approx(0.0, abs=1e-4)
    assert np.allclose(m.predict_proba(X)[:, 1], 0.5, atol=1e-4)

    yr = rng.normal(size=40) + 3.0
    mr = fit_elastic_net(X, yr, task="linear", alpha=0.5, C=1e-9)
    assert np.all(mr.coef_ == 0.0)
    assert mr.intercept_[0] == pytest.approx(yr.mean(), abs=1e-6)


def test_logistic_matches_newton_oracle():
    rng = np.random.default_rng(7)
    x = rng.normal(size=60)
    y = (x + rng.normal(scale=1.2, size=60) > 0).astype(float)
    X = x[:, None]
    C = 1e6
    m = fit_elastic_net(X, y, task="logistic", alpha=0.0, C=C)

    # independent 2-D Newton solve of the same objective
    lam2 = 1.0 / (C * 60)
    wb = np.zeros(2)
    for _ in range(60):
        z = x * wb[0] + wb[1]
        p = 1.0 / (1.0 + np.exp(-z))
        g = np.array([(x * (p - y)).mean() + lam2 * wb[0], (p - y).mean()])
        r = p * (1 - p)
        H = np.array([
            [(r * x * x).mean() + lam2, (r * x).mean()],
            [(r * x).mean(), r.mean()],
        ])
        wb -= np.linalg.solve(H, g)
    assert m.coef_[0, 0] == pytest.approx(wb[0], abs=1e-4)
    assert m.intercept_[0] == pytest.approx(wb[1], abs=1e-4)


def test_linear_recovers_exact_slope():
    rng = np.random.default_rng(3)
    x = rng.normal(size=50)
    y = 3.0 * x + 2.0
    m = fit_elastic_net(x[:, None], y, task="linear", alpha=0.0, C=1e6)
    assert m.coef_[0, 0] == pytest.approx(3.0, abs=1e-3)
    assert m.intercept_[0] == pytest.approx(2.0, abs=1e-3)


def test_objective_monotone_and_subgradient():
    rng = np.random.default_rng(11)
    for trial in range(6):
        n, p = 30 + 5 * trial, 4 + trial
        X = rng.normal(size=(n, p))
        task = "logistic" if trial % 2 == 0 else "linear"
        if task == "logistic":
            y = (X[:, 0] + rng.normal(size=n) > 0).astype(np.int64)
        else:
            y = X[:, 0] + 0.3 * rng.normal(size=n)
        s = np.ones(n)
        alpha = (0.1, 0.55, 1.0)[trial % 3]
        m = fit_elastic_net(X, y, task=task, alpha=alpha, C=0.5, sample_weight=s)
        for hist in m.objective_history_:
            assert np.all(np.diff(hist) <= 1e-12)
        assert subgradient_violation(m, X, y, s) < 1e-4


def test_weight_doubling_leaves_predictions():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(50, 4))
    y = (X[:, 1] > 0).astype(np.int64)
    s = sample_weights(y, balanced_class_weights(y))
    m1 = fit_elastic_net(X, y, task="logistic", alpha=0.5, C=1.0, sample_weight=s)
    m2 = fit_elastic_net(X, y, task="logistic", alpha=0.5, C=1.0, sample_weight=2 * s)
    assert np.array_equal(m1.coef_, m2.coef_)
    assert np.array_equal(m1.predict(X), m2.predict(X))


def test_multiclass_ovr_probabilities():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(90, 3))
    y = np.repeat([0, 1, 2], 30)
    X[:, 0] += y * 3.5
    m = fit_elastic_net(X, y, task="logistic", alpha=0.1, C=1.0)
    proba = m.predict_proba(X)
    assert proba.shape == (90, 3)
    assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-12)
    assert np.all((proba > 0) & (proba < 1))
    assert (m.predict(X) == y).mean() > 0.8


def test_manual_linear_predict():
    m = ElasticNetGLM(task="linear", alpha=0.0, C=1.0,
                      coef_=np.array([[2.0]]), intercept_=np.array([1.0]))
    assert m.predict(np.array([[3.0]]))[0] == pytest.approx(7.0)
    with pytest.raises(ShapeMismatch):
        m.predict(np.zeros((1, 4)))


def test_l1_selection_monte_carlo():
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(200, 50))
        y = (X[:, 31] + 0.6 * rng.normal(size=200) > 0).astype(np.int64)
        sel = l1_select_features(X, y, selection_c=0.1)
        hits += 31 in sel.tolist()
    assert hits >= 95


def test_l1_selection_fallback_and_order():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(60, 30))
    y = rng.integers(0, 2, 60)
    sel = l1_select_features(X, y, selection_c=1e-9)
    assert sel.shape[0] == 10
    assert np.all(np.diff(sel) > 0)
    sel2 = l1_select_features(X, (X[:, 4] > 0).astype(int), selection_c=0.1)
    assert np.all(np.diff(sel2) > 0)


# -- random forest ----------------------------------------------------------------


def test_forest_pure_labels():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(20, 3))
    y = np.ones(20, dtype=np.int64)
    m = fit_random_forest(X, y, "classification", max_depth=3, max_features=2, n_trees=10, seed=0)
    proba = m.predict_proba(X)
    assert np.all(proba == 1.0)
    assert np.all(m.predict(X) == 1)


def test_forest_depth_invariant():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(80, 6))
    y = rng.integers(0, 3, 80)
    for depth in (2, 3):
        m = fit_random_forest(X, y, "classification", max_depth=depth,
                              max_features=4, n_trees=25, seed=3)
        assert max(t.depth for t in m.trees) <= depth


def test_forest_determinism():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(60, 5))
    y = (X[:, 0] > 0).astype(np.int64)
    a = fit_random_forest(X, y, "classification", max_depth=3, max_features=3, n_trees=40, seed=9)
    b = fit_random_forest(X, y, "classification", max_depth=3, max_features=3, n_trees=40, seed=9)
    assert np.array_equal(a.predict_proba(X), b.predict_proba(X))
    c = fit_random_forest(X, y, "classification", max_depth=3, max_features=3, n_trees=40, seed=10)
    assert not np.array_equal(a.predict_proba(X), c.predict_proba(X))


def test_forest_regression_learns_step():
    rng = np.random.default_rng(8)
    X = rng.uniform(-1, 1, size=(120, 2))
    y = np.where(X[:, 0] > 0, 5.0, -5.0)
    m = fit_random_forest(X, y, "regression", max_depth=2, max_features=2, n_trees=40, seed=2)
    pred = m.predict(X)
    assert np.corrcoef(pred, y)[0, 1] > 0.95


def test_forest_validation():
    X, y = np.zeros((4, 2)), np.array([0, 1, 0, 1])
    with pytest.raises(BadDepth):
        fit_random_forest(X, y, max_depth=0)
    with pytest.raises(BadMaxFeatures):
        fit_random_forest(X, y, max_features=0)


def test_forest_roundtrip_state():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(40, 4))
    y = (X[:, 1] > 0).astype(np.int64)
    m = fit_random_forest(X, y, "classification", max_depth=3, max_features=2, n_trees=15, seed=4)
    from inkscreen.learners.forest import RandomForestModel

    m2 = RandomForestModel.from_state(m.to_state())
    assert np.array_equal(m.predict_proba(X), m2.predict_proba(X))


# -- SVM ---------------------------------------------------------------------------


def test_svm_separable_zero_hinge():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [3.0, 0.0], [3.0, 1.0]])
    y = np.array([0, 0, 1, 1])
    m = fit_svm(X, y, kernel="linear", C=100.0)
    d = m.decision_function(X)
    assert np.all((d > 0).astype(int) == y)
    ysign = np.where(y == 1, 1.0, -1.0)
    assert np.maximum(0.0, 1.0 - ysign * d).sum() <= 1e-9


def test_svm_rbf_memorizes():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(30, 2))
    y = rng.integers(0, 2, 30)
    m = fit_svm(X, y, kernel="rbf", C=100.0, gamma=500.0)
    assert np.all(m.predict(X) == y)


def test_svm_dual_feasibility():
    rng = np.random.default_rng(4)
    for trial in range(5):
        X = rng.normal(size=(50, 4))
        y = rng.integers(0, 2, 50)
        if len(np.unique(y)) < 2:
            continue
        s = sample_weights(y, balanced_class_weights(y))
        m = fit_svm(X, y, kernel="rbf", C=10.0, gamma=0.1, sample_weight=s)
        assert np.all(m.alpha_ >= -1e-12)
        assert np.all(m.alpha_ <= m.box_ + 1e-12)
        assert abs(float(m.alpha_ @ m.y_)) <= 1e-6


def test_svm_kkt_at_convergence():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(60, 5))
    y = (X[:, 0] + 0.5 * rng.normal(size=60) > 0).astype(int)
    m = fit_svm(X, y, kernel="rbf", C=10.0, gamma=0.1)
    K = kernel_matrix(X, X, "rbf", 0.1)
    E = K @ (m.alpha_ * m.y_) + m.bias - m.y_
    viol = m.y_ * E
    eps = 1e-8 * (1.0 + m.box_)
    bad = ((viol < -1e-3 - 1e-6) & (m.alpha_ < m.box_ - eps)) | (
        (viol > 1e-3 + 1e-6) & (m.alpha_ > eps)
    )
    assert not bad.any()


def test_svm_validation():
    X = np.array([[0.0], [1.0]])
    y = np.array([0, 1])
    with pytest.raises(BadC):
        fit_svm(X, y, C=0.0)
    with pytest.raises(BadKernel):
        fit_svm(X, y, kernel="poly")
    with pytest.raises(BadGamma):
        fit_svm(X, y, kernel="rbf", gamma=0.0)
    with pytest.raises(SingleClass):
        fit_svm(X, np.array([1, 1]))


def test_svm_weight_doubling():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(40, 3))
    y = (X[:, 0] > 0).astype(int)
    s = sample_weights(y, balanced_class_weights(y))
    m1 = fit_svm(X, y, kernel="linear", C=5.0, sample_weight=s)
    m2 = fit_svm(X, y, kernel="linear", C=5.0, sample_weight=2 * s)
    assert np.array_equal(m1.decision_function(X), m2.decision_function(X))


def test_svm_ovr_three_classes():
    rng = np.random.default_rng(13)
    X = rng.normal(size=(90, 2))
    y = np.repeat([0, 1, 2], 30)
    X[:, 0] += 4.0 * y
    m = fit_svm_ovr(X, y, kernel="linear", C=10.0)
    assert m.decision_matrix(X).shape == (90, 3)
    assert (m.predict(X) == y).mean() > 0.9
