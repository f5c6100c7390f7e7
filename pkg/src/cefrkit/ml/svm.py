"""RBF-kernel support vector classifier trained with SMO.

Binary subproblems are solved by sequential minimal optimization (dual
tolerance 1e-3, penalty 1.0); multiclass is one-vs-one with vote
aggregation, ties broken by the aggregate decision margin. The kernel
width is 1/(d * mean feature variance) of the training matrix. Candidate
scans use fixed index order, so training is deterministic.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

C_PENALTY = 1.0
KKT_TOL = 1e-3
_STEP_EPS = 1e-12
_MAX_SWEEPS = 1000


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    aa = np.sum(a * a, axis=1)[:, None]
    bb = np.sum(b * b, axis=1)[None, :]
    sq = aa + bb - 2.0 * (a @ b.T)
    return np.exp(-gamma * np.maximum(sq, 0.0))


class _BinarySMO:
    def __init__(self, gamma: float, c: float = C_PENALTY, tol: float = KKT_TOL):
        self.gamma = gamma
        self.c = c
        self.tol = tol

    def fit(self, X: np.ndarray, y: np.ndarray):
        n = len(y)
        K = rbf_kernel(X, X, self.gamma)
        alpha = np.zeros(n)
        self.b = 0.0
        errors = -y.astype(float)  # f = 0 initially

        def take_step(i1: int, i2: int) -> bool:
            nonlocal errors
            if i1 == i2:
                return False
            a1_old, a2_old = alpha[i1], alpha[i2]
            y1, y2 = y[i1], y[i2]
            e1, e2 = errors[i1], errors[i2]
            s = y1 * y2
            if s > 0:
                low = max(0.0, a1_old + a2_old - self.c)
                high = min(self.c, a1_old + a2_old)
            else:
                low = max(0.0, a2_old - a1_old)
                high = min(self.c, self.c + a2_old - a1_old)
            if high - low < _STEP_EPS:
                return False
            eta = K[i1, i1] + K[i2, i2] - 2.0 * K[i1, i2]
            if eta <= 0.0:
                return False
            a2 = a2_old + y2 * (e1 - e2) / eta
            a2 = min(max(a2, low), high)
            if abs(a2 - a2_old) < _STEP_EPS * (a2 + a2_old + _STEP_EPS):
                return False
            a1 = a1_old + s * (a2_old - a2)
            d1 = y1 * (a1 - a1_old)
            d2 = y2 * (a2 - a2_old)
            b1 = self.b - e1 - d1 * K[i1, i1] - d2 * K[i1, i2]
            b2 = self.b - e2 - d1 * K[i1, i2] - d2 * K[i2, i2]
            if 0.0 < a1 < self.c:
                b_new = b1
            elif 0.0 < a2 < self.c:
                b_new = b2
            else:
                b_new = 0.5 * (b1 + b2)
            alpha[i1], alpha[i2] = a1, a2
            errors += d1 * K[i1] + d2 * K[i2] + (b_new - self.b)
            self.b = b_new
            return True

        def examine(i2: int) -> int:
            r2 = errors[i2] * y[i2]
            if not (
                (r2 < -self.tol and alpha[i2] < self.c)
                or (r2 > self.tol and alpha[i2] > 0.0)
            ):
                return 0
            non_bound = np.flatnonzero((alpha > 0.0) & (alpha < self.c))
            if len(non_bound) > 1:
                i1 = int(non_bound[np.argmax(np.abs(errors[non_bound] - errors[i2]))])
                if take_step(i1, i2):
                    return 1
            for i1 in non_bound:
                if take_step(int(i1), i2):
                    return 1
            for i1 in range(len(y)):
                if take_step(i1, i2):
                    return 1
            return 0

        examine_all = True
        sweeps = 0
        while sweeps < _MAX_SWEEPS:
            sweeps += 1
            changed = 0
            if examine_all:
                targets = range(n)
            else:
                targets = np.flatnonzero((alpha > 0.0) & (alpha < self.c))
            for i in targets:
                changed += examine(int(i))
            if examine_all:
                examine_all = False
                if changed == 0:
                    break
            elif changed == 0:
                examine_all = True

        keep = alpha > 1e-10
        self.support_vectors = X[keep]
        self.coef = (alpha * y)[keep]
        return self

    def decision(self, X: np.ndarray) -> np.ndarray:
        if len(self.coef) == 0:
            return np.full(X.shape[0], self.b)
        return rbf_kernel(X, self.support_vectors, self.gamma) @ self.coef + self.b


class SVM:
    name = "svm"

    def __init__(self):
        self.gamma: float | None = None
        self.n_classes = 0
        self.machines: dict[tuple[int, int], _BinarySMO] = {}

    def fit(self, X, y, n_classes: int, seed: int = 0) -> "SVM":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        mean_var = float(np.mean(np.var(X, axis=0)))
        self.gamma = 1.0 / (X.shape[1] * mean_var) if mean_var > 0 else 1.0
        self.n_classes = n_classes
        self.machines = {}
        for a, b in combinations(range(n_classes), 2):
            mask = (y == a) | (y == b)
            rows = X[mask]
            signs = np.where(y[mask] == a, 1.0, -1.0)
            machine = _BinarySMO(self.gamma)
            machine.fit(rows, signs)
            self.machines[(a, b)] = machine
        return self

    def _votes_and_margins(self, X: np.ndarray):
        n = X.shape[0]
        votes = np.zeros((n, self.n_classes))
        margins = np.zeros((n, self.n_classes))
        for (a, b), machine in self.machines.items():
            decision = machine.decision(X)
            winner_a = decision >= 0.0
            votes[winner_a, a] += 1
            votes[~winner_a, b] += 1
            margins[:, a] += decision
            margins[:, b] -= decision
        return votes, margins

    def decision_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        votes, margins = self._votes_and_margins(X)
        # margins only break ties between equal vote counts
        return votes + 1e-9 * np.tanh(margins)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def get_params(self) -> dict:
        return {
            "gamma": self.gamma,
            "n_classes": self.n_classes,
            "machines": [
                {
                    "pair": [a, b],
                    "support_vectors": machine.support_vectors.tolist(),
                    "coef": machine.coef.tolist(),
                    "intercept": machine.b,
                }
                for (a, b), machine in sorted(self.machines.items())
            ],
        }

    @classmethod
    def from_params(cls, params: dict) -> "SVM":
        model = cls()
        model.gamma = params["gamma"]
        model.n_classes = params["n_classes"]
        model.machines = {}
        for row in params["machines"]:
            machine = _BinarySMO(model.gamma)
            machine.support_vectors = np.array(row["support_vectors"], dtype=float)
            machine.coef = np.array(row["coef"], dtype=float)
            machine.b = row["intercept"]
            model.machines[tuple(row["pair"])] = machine
        return model
