"""Single-hidden-layer perceptron trained with Adam.

100 rectified hidden units, softmax output, mean cross-entropy loss,
full-batch Adam at step 1e-3, at most 2000 epochs, stopping early when
the loss has not improved by more than 1e-6 for 10 consecutive epochs.
Backprop gradients are exposed for finite-difference validation.
"""

from __future__ import annotations

import numpy as np

HIDDEN_UNITS = 100
LEARNING_RATE = 1e-3
MAX_EPOCHS = 2000
PLATEAU_TOL = 1e-6
PLATEAU_PATIENCE = 10
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def _log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


class MLP:
    name = "mlp"

    def __init__(self, hidden_units: int = HIDDEN_UNITS):
        self.hidden_units = hidden_units
        self.params: dict[str, np.ndarray] = {}
        self.n_classes = 0

    def _init_params(self, d: int, k: int, rng: np.random.Generator) -> dict:
        limit1 = np.sqrt(6.0 / (d + self.hidden_units))
        limit2 = np.sqrt(6.0 / (self.hidden_units + k))
        return {
            "w1": rng.uniform(-limit1, limit1, size=(d, self.hidden_units)),
            "b1": np.zeros(self.hidden_units),
            "w2": rng.uniform(-limit2, limit2, size=(self.hidden_units, k)),
            "b2": np.zeros(k),
        }

    @staticmethod
    def loss_and_gradients(params: dict, X: np.ndarray, onehot: np.ndarray):
        """Mean cross-entropy and its gradients (analytic backprop)."""
        n = X.shape[0]
        pre_hidden = X @ params["w1"] + params["b1"]
        hidden = np.maximum(pre_hidden, 0.0)
        scores = hidden @ params["w2"] + params["b2"]
        log_probs = _log_softmax(scores)
        loss = -np.sum(onehot * log_probs) / n

        delta_out = (np.exp(log_probs) - onehot) / n
        grad_w2 = hidden.T @ delta_out
        grad_b2 = delta_out.sum(axis=0)
        delta_hidden = (delta_out @ params["w2"].T) * (pre_hidden > 0.0)
        grad_w1 = X.T @ delta_hidden
        grad_b1 = delta_hidden.sum(axis=0)
        grads = {"w1": grad_w1, "b1": grad_b1, "w2": grad_w2, "b2": grad_b2}
        return loss, grads

    def fit(self, X, y, n_classes: int, seed: int = 0) -> "MLP":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        n, d = X.shape
        self.n_classes = n_classes
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y] = 1.0

        rng = np.random.default_rng(seed)
        params = self._init_params(d, n_classes, rng)
        moment1 = {k: np.zeros_like(v) for k, v in params.items()}
        moment2 = {k: np.zeros_like(v) for k, v in params.items()}

        best_loss = np.inf
        stale = 0
        for step in range(1, MAX_EPOCHS + 1):
            loss, grads = self.loss_and_gradients(params, X, onehot)
            if loss < best_loss - PLATEAU_TOL:
                best_loss = loss
                stale = 0
            else:
                stale += 1
                if stale >= PLATEAU_PATIENCE:
                    break
            for key in params:
                moment1[key] = ADAM_BETA1 * moment1[key] + (1 - ADAM_BETA1) * grads[key]
                moment2[key] = ADAM_BETA2 * moment2[key] + (1 - ADAM_BETA2) * grads[key] ** 2
                m_hat = moment1[key] / (1 - ADAM_BETA1**step)
                v_hat = moment2[key] / (1 - ADAM_BETA2**step)
                params[key] = params[key] - LEARNING_RATE * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
        self.params = params
        return self

    def decision_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        hidden = np.maximum(X @ self.params["w1"] + self.params["b1"], 0.0)
        return hidden @ self.params["w2"] + self.params["b2"]

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def get_params(self) -> dict:
        return {
            "hidden_units": self.hidden_units,
            "n_classes": self.n_classes,
            "params": {k: v.tolist() for k, v in self.params.items()},
        }

    @classmethod
    def from_params(cls, data: dict) -> "MLP":
        model = cls(hidden_units=data["hidden_units"])
        model.n_classes = data["n_classes"]
        model.params = {k: np.array(v, dtype=float) for k, v in data["params"].items()}
        return model
