"""Reported metrics: classification, ranking, regression, and 95% CIs.

AUC is the Mann-Whitney rank statistic (ties contribute 1/2); multiclass AUC
is the unweighted mean of per-class one-vs-rest AUCs. Sensitivity is the
recall of the designated positive class (the more-impaired group in each
pairing); specificity is the recall of the other class.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateAUC, Empty, TooFew


def _check_pair(y_true, other) -> tuple[np.ndarray, np.ndarray]:
    y_true = np.asarray(y_true)
    other = np.asarray(other)
    if y_true.shape[0] == 0 or y_true.shape[0] != other.shape[0]:
        raise Empty(f"lengths {y_true.shape[0]} and {other.shape[0]}")
    return y_true, other


def confusion_matrix(y_true, y_pred, labels) -> np.ndarray:
    """Counts with rows = truth, columns = prediction, in `labels` order."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    labels = list(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    out = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(y_true.tolist(), y_pred.tolist()):
        out[index[t], index[p]] += 1
    return out


def accuracy(y_true, y_pred) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    return float(np.mean(y_true == y_pred))


def _recall(y_true, y_pred, label) -> float:
    mask = y_true == label
    if not mask.any():
        return np.nan
    return float(np.mean(y_pred[mask] == label))


def sensitivity(y_true, y_pred, pos_label) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    return _recall(y_true, y_pred, pos_label)


def specificity(y_true, y_pred, pos_label) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    rest = np.unique(y_true[y_true != pos_label])
    if rest.shape[0] != 1:
        raise Empty("specificity needs a binary truth")
    neg = rest[0]
    mask = y_true == neg
    return float(np.mean(y_pred[mask] == neg))


def f1_score(y_true, y_pred, pos_label) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    tp = float(np.sum((y_pred == pos_label) & (y_true == pos_label)))
    fp = float(np.sum((y_pred == pos_label) & (y_true != pos_label)))
    fn = float(np.sum((y_pred != pos_label) & (y_true == pos_label)))
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 0.0
    return 2 * tp / denom


def macro_f1(y_true, y_pred, labels) -> float:
    return float(np.mean([f1_score(y_true, y_pred, lab) for lab in labels]))


def _average_ranks(scores: np.ndarray) -> np.ndarray:
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.shape[0])
    sorted_scores = scores[order]
    i = 0
    while i < scores.shape[0]:
        j = i
        while j + 1 < scores.shape[0] and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def roc_auc(y_true, scores, pos_label=None) -> float:
    """Binary AUC by the rank statistic; ties contribute one half."""
    y_true, scores = _check_pair(y_true, np.asarray(scores, dtype=np.float64))
    labels = np.unique(y_true)
    if labels.shape[0] < 2:
        raise DegenerateAUC("truth contains a single class")
    if labels.shape[0] > 2:
        raise Empty("binary AUC needs exactly two classes")
    if pos_label is None:
        pos_label = labels[1]
    pos = y_true == pos_label
    n_pos = int(pos.sum())
    n_neg = int((~pos).sum())
    ranks = _average_ranks(scores)
    rank_sum = float(ranks[pos].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def macro_ovr_auc(y_true, score_matrix, labels) -> float:
    """Unweighted mean of per-class one-vs-rest AUCs."""
    y_true = np.asarray(y_true)
    score_matrix = np.asarray(score_matrix, dtype=np.float64)
    if score_matrix.ndim != 2 or score_matrix.shape[1] != len(labels):
        raise Empty(f"score matrix shape {score_matrix.shape} != (n, {len(labels)})")
    aucs = []
    for k, lab in enumerate(labels):
        member = (y_true == lab).astype(np.int64)
        if member.min() == member.max():
            raise DegenerateAUC(f"class {lab!r} missing from truth or covering it")
        aucs.append(roc_auc(member, score_matrix[:, k], pos_label=1))
    return float(np.mean(aucs))


def r2_score(y_true, y_pred) -> float:
    y_true, y_pred = _check_pair(
        np.asarray(y_true, dtype=np.float64), np.asarray(y_pred, dtype=np.float64)
    )
    ss_res = float(np.sum((y_true - y_pred) ** 2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0:
        raise Empty("R^2 undefined for a constant truth")
    return 1.0 - ss_res / ss_tot


def mae(y_true, y_pred) -> float:
    y_true, y_pred = _check_pair(
        np.asarray(y_true, dtype=np.float64), np.asarray(y_pred, dtype=np.float64)
    )
    return float(np.mean(np.abs(y_true - y_pred)))


def rmse(y_true, y_pred) -> float:
    y_true, y_pred = _check_pair(
        np.asarray(y_true, dtype=np.float64), np.asarray(y_pred, dtype=np.float64)
    )
    return float(np.sqrt(np.mean((y_true - y_pred) ** 2)))


def ci95(values) -> tuple[float, float]:
    """Normal-approximation 95% CI: mean +/- 1.96 * sd / sqrt(n)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise TooFew(f"need >= 2 values, got {v.size}")
    half = 1.96 * v.std(ddof=1) / np.sqrt(v.size)
    m = float(v.mean())
    return m - half, m + half
