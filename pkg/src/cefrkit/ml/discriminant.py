"""Linear and quadratic discriminant analysis (Gaussian class models).

LDA pools a single within-class covariance; QDA keeps one per class.
Both add a 1e-6 ridge to the covariance diagonal so near-singular
fixtures stay solvable.
"""

from __future__ import annotations

import numpy as np

RIDGE = 1e-6


class LinearDiscriminant:
    name = "lda"

    def __init__(self):
        self.means: np.ndarray | None = None       # (k, d)
        self.covariance: np.ndarray | None = None  # (d, d) pooled
        self.log_priors: np.ndarray | None = None

    def fit(self, X, y, n_classes: int, seed: int = 0) -> "LinearDiscriminant":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        n, d = X.shape
        means = np.zeros((n_classes, d))
        pooled = np.zeros((d, d))
        priors = np.zeros(n_classes)
        for cls in range(n_classes):
            rows = X[y == cls]
            means[cls] = rows.mean(axis=0)
            centered = rows - means[cls]
            pooled += centered.T @ centered
            priors[cls] = len(rows) / n
        pooled /= n - n_classes
        pooled[np.diag_indices(d)] += RIDGE
        self.means = means
        self.covariance = pooled
        self.log_priors = np.log(priors)
        return self

    def decision_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        precision_means = np.linalg.solve(self.covariance, self.means.T)  # (d, k)
        linear = X @ precision_means
        const = -0.5 * np.sum(self.means.T * precision_means, axis=0) + self.log_priors
        return linear + const

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def get_params(self) -> dict:
        return {
            "means": self.means.tolist(),
            "covariance": self.covariance.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "LinearDiscriminant":
        model = cls()
        model.means = np.array(params["means"], dtype=float)
        model.covariance = np.array(params["covariance"], dtype=float)
        model.log_priors = np.array(params["log_priors"], dtype=float)
        return model


class QuadraticDiscriminant:
    name = "qda"

    def __init__(self):
        self.means: np.ndarray | None = None
        self.covariances: np.ndarray | None = None  # (k, d, d)
        self.log_priors: np.ndarray | None = None

    def fit(self, X, y, n_classes: int, seed: int = 0) -> "QuadraticDiscriminant":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        n, d = X.shape
        means = np.zeros((n_classes, d))
        covariances = np.zeros((n_classes, d, d))
        priors = np.zeros(n_classes)
        for cls in range(n_classes):
            rows = X[y == cls]
            means[cls] = rows.mean(axis=0)
            centered = rows - means[cls]
            cov = centered.T @ centered / max(len(rows) - 1, 1)
            cov[np.diag_indices(d)] += RIDGE
            covariances[cls] = cov
            priors[cls] = len(rows) / n
        self.means = means
        self.covariances = covariances
        self.log_priors = np.log(priors)
        return self

    def decision_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        n = X.shape[0]
        k = self.means.shape[0]
        scores = np.zeros((n, k))
        for cls in range(k):
            centered = X - self.means[cls]
            sign, logdet = np.linalg.slogdet(self.covariances[cls])
            solved = np.linalg.solve(self.covariances[cls], centered.T).T
            mahalanobis = np.sum(centered * solved, axis=1)
            scores[:, cls] = -0.5 * (logdet + mahalanobis) + self.log_priors[cls]
        return scores

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def get_params(self) -> dict:
        return {
            "means": self.means.tolist(),
            "covariances": self.covariances.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "QuadraticDiscriminant":
        model = cls()
        model.means = np.array(params["means"], dtype=float)
        model.covariances = np.array(params["covariances"], dtype=float)
        model.log_priors = np.array(params["log_priors"], dtype=float)
        return model
