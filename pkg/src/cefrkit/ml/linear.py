"""Multinomial logistic regression, plain and with internal CV.

The model is softmax regression with an L2 penalty on the weights (not
the intercept): loss = sum cross-entropy + 0.5 * ||W||^2 / strength.
L-BFGS drives the fit against our analytic gradient, so first-order
optimality of the solution can be checked directly.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from cefrkit.ml.folds import stratified_folds

_GRADIENT_TOL = 1e-7
_MAX_ITER = 5000

CV_STRENGTHS = np.logspace(-4, 4, 10)


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


class LogisticRegression:
    name = "lr"

    def __init__(self, strength: float = 1.0):
        self.strength = float(strength)
        self.weights: np.ndarray | None = None   # (d, k)
        self.intercept: np.ndarray | None = None  # (k,)
        self.n_classes = 0

    def _loss_grad(self, flat: np.ndarray, X: np.ndarray, onehot: np.ndarray):
        n, d = X.shape
        k = onehot.shape[1]
        W = flat[: d * k].reshape(d, k)
        b = flat[d * k :]
        scores = X @ W + b
        log_probs = _log_softmax(scores)
        penalty = 0.5 / self.strength
        loss = -np.sum(onehot * log_probs) + penalty * np.sum(W * W)
        probs = np.exp(log_probs)
        delta = probs - onehot
        grad_w = X.T @ delta + (1.0 / self.strength) * W
        grad_b = delta.sum(axis=0)
        return loss, np.concatenate([grad_w.ravel(), grad_b])

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "LogisticRegression":
        X = np.asarray(X, dtype=float)
        n, d = X.shape
        self.n_classes = n_classes
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y] = 1.0
        x0 = np.zeros(d * n_classes + n_classes)
        result = minimize(
            self._loss_grad,
            x0,
            args=(X, onehot),
            method="L-BFGS-B",
            jac=True,
            options={"maxiter": _MAX_ITER, "gtol": _GRADIENT_TOL, "ftol": 1e-15},
        )
        flat = result.x
        self.weights = flat[: d * n_classes].reshape(d, n_classes)
        self.intercept = flat[d * n_classes :]
        return self

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.weights + self.intercept

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _softmax(self.decision_scores(X))

    def gradient_max_norm(self, X: np.ndarray, y: np.ndarray) -> float:
        """Max-norm of the training gradient at the fitted parameters."""
        n, d = np.asarray(X).shape
        onehot = np.zeros((n, self.n_classes))
        onehot[np.arange(n), y] = 1.0
        flat = np.concatenate([self.weights.ravel(), self.intercept])
        _, grad = self._loss_grad(flat, np.asarray(X, dtype=float), onehot)
        return float(np.max(np.abs(grad)))

    def get_params(self) -> dict:
        return {
            "strength": self.strength,
            "weights": self.weights.tolist(),
            "intercept": self.intercept.tolist(),
            "n_classes": self.n_classes,
        }

    @classmethod
    def from_params(cls, params: dict) -> "LogisticRegression":
        model = cls(strength=params["strength"])
        model.weights = np.array(params["weights"], dtype=float)
        model.intercept = np.array(params["intercept"], dtype=float)
        model.n_classes = params["n_classes"]
        return model


class LogisticRegressionCV:
    """Logistic regression with an internal stratified 5-fold search over
    10 log-spaced regularization strengths in [1e-4, 1e4]. Accuracy ties
    resolve to the strongest regularization (smallest strength)."""

    name = "lr_cv"

    def __init__(self):
        self.best_strength: float | None = None
        self.model: LogisticRegression | None = None

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "LogisticRegressionCV":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        folds = stratified_folds(y, 5, seed)
        all_rows = np.arange(len(y))
        accuracies = []
        for strength in CV_STRENGTHS:
            correct = 0
            for fold in folds:
                train_rows = np.setdiff1d(all_rows, fold)
                candidate = LogisticRegression(strength=strength)
                candidate.fit(X[train_rows], y[train_rows], n_classes, seed)
                correct += int(np.sum(candidate.predict(X[fold]) == y[fold]))
            accuracies.append(correct / len(y))
        best = int(np.argmax(accuracies))  # first max: strongest regularization
        self.best_strength = float(CV_STRENGTHS[best])
        self.model = LogisticRegression(strength=self.best_strength).fit(
            X, y, n_classes, seed
        )
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.model.predict(X)

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return self.model.decision_scores(X)

    def get_params(self) -> dict:
        return {"best_strength": self.best_strength, "model": self.model.get_params()}

    @classmethod
    def from_params(cls, params: dict) -> "LogisticRegressionCV":
        out = cls()
        out.best_strength = params["best_strength"]
        out.model = LogisticRegression.from_params(params["model"])
        return out
