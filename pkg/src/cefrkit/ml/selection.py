"""Feature selection: univariate F scoring and sequential forward search."""

from __future__ import annotations

import numpy as np

from cefrkit.ml.folds import stratified_folds

SEQUENTIAL_CV_FOLDS = 5
SEQUENTIAL_PATIENCE = 3


class SelectionError(Exception):
    pass


def anova_f_scores(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Classic equal-variance one-way ANOVA F per column.

    Zero-variance columns score 0; perfectly class-separated constant
    columns score inf (informative, never masked by noise features).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    classes = np.unique(y)
    n, _ = X.shape
    k = len(classes)
    grand = X.mean(axis=0)
    ss_between = np.zeros(X.shape[1])
    ss_within = np.zeros(X.shape[1])
    for cls in classes:
        rows = X[y == cls]
        mean = rows.mean(axis=0)
        ss_between += len(rows) * (mean - grand) ** 2
        ss_within += np.sum((rows - mean) ** 2, axis=0)
    scores = np.zeros(X.shape[1])
    with np.errstate(divide="ignore", invalid="ignore"):
        f = (ss_between / (k - 1)) / (ss_within / (n - k))
    nonzero = ss_between > 0
    scores[nonzero & (ss_within > 0)] = f[nonzero & (ss_within > 0)]
    scores[nonzero & (ss_within == 0)] = np.inf
    return scores


def select_univariate(X: np.ndarray, y: np.ndarray, k: int) -> list[int]:
    """Indices of the k highest-F columns; ties keep input (catalog) order."""
    if k < 1 or k > X.shape[1]:
        raise SelectionError(f"k={k} out of range for {X.shape[1]} features")
    scores = anova_f_scores(X, y)
    order = np.argsort(-scores, kind="stable")
    return sorted(int(i) for i in order[:k])


def _cv_accuracy(X, y, n_classes, columns, classifier_factory, folds, seed) -> float:
    correct = 0
    total = 0
    all_rows = np.arange(len(y))
    for fold in folds:
        train_rows = np.setdiff1d(all_rows, fold)
        model = classifier_factory()
        model.fit(X[np.ix_(train_rows, columns)], y[train_rows], n_classes, seed)
        predictions = model.predict(X[np.ix_(fold, columns)])
        correct += int(np.sum(predictions == y[fold]))
        total += len(fold)
    return correct / total


def select_sequential(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    classifier_factory,
    seed: int,
) -> list[int]:
    """Greedy forward selection scored by stratified 5-fold CV accuracy.

    Each round accepts the best-scoring candidate (ties keep catalog
    order); the search stops once three consecutive accepted additions
    fail to beat the best score seen, and the prefix achieving that best
    score is returned.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    folds = stratified_folds(y, SEQUENTIAL_CV_FOLDS, seed)
    remaining = list(range(X.shape[1]))
    selected: list[int] = []
    best_score = -np.inf
    best_length = 0
    failures = 0

    while remaining:
        scores = [
            _cv_accuracy(X, y, n_classes, selected + [c], classifier_factory, folds, seed)
            for c in remaining
        ]
        pick = int(np.argmax(scores))  # first max keeps catalog order on ties
        score = scores[pick]
        selected.append(remaining.pop(pick))
        if score > best_score:
            best_score = score
            best_length = len(selected)
            failures = 0
        else:
            failures += 1
            if failures >= SEQUENTIAL_PATIENCE:
                break
    return selected[:best_length]
