"""Random forest: bagged CART trees with Gini impurity.

100 trees, sqrt(d) candidate features per split, unlimited depth,
bootstrap sampling, all randomness drawn from per-tree generators spawned
off the training seed. Prediction averages leaf class distributions.
"""

from __future__ import annotations

import math

import numpy as np

N_TREES = 100


def _gini_best_split(values: np.ndarray, labels: np.ndarray, n_classes: int):
    """Best (threshold, impurity_decrease) for one feature; None if unsplittable."""
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    sorted_labels = labels[order]
    n = len(values)
    counts = np.zeros((n, n_classes))
    counts[np.arange(n), sorted_labels] = 1.0
    prefix = np.cumsum(counts, axis=0)
    total = prefix[-1]

    # split after position i (left = [:i+1]) only where the value changes
    boundary = np.flatnonzero(sorted_values[:-1] < sorted_values[1:])
    if len(boundary) == 0:
        return None
    left = prefix[boundary]
    right = total - left
    n_left = boundary + 1.0
    n_right = n - n_left
    gini_left = 1.0 - np.sum((left / n_left[:, None]) ** 2, axis=1)
    gini_right = 1.0 - np.sum((right / n_right[:, None]) ** 2, axis=1)
    gini_parent = 1.0 - np.sum((total / n) ** 2)
    decrease = gini_parent - (n_left * gini_left + n_right * gini_right) / n
    best = int(np.argmax(decrease))
    pos = boundary[best]
    threshold = 0.5 * (sorted_values[pos] + sorted_values[pos + 1])
    return float(threshold), float(decrease[best])


class DecisionTree:
    def __init__(self, max_features: int, seed: int):
        self.max_features = max_features
        self.seed = seed
        self.nodes: dict | None = None

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int) -> "DecisionTree":
        rng = np.random.default_rng(self.seed)
        n, d = X.shape

        def build(rows: np.ndarray) -> dict:
            labels = y[rows]
            counts = np.bincount(labels, minlength=n_classes).astype(float)
            if len(rows) < 2 or counts.max() == len(rows):
                return {"counts": counts.tolist()}
            candidates = rng.choice(d, size=min(self.max_features, d), replace=False)
            best = None
            for feature in candidates:
                split = _gini_best_split(X[rows, feature], labels, n_classes)
                if split is None:
                    continue
                threshold, decrease = split
                if best is None or decrease > best[2]:
                    best = (int(feature), threshold, decrease)
            if best is None or best[2] <= 0.0:
                return {"counts": counts.tolist()}
            feature, threshold, _ = best
            mask = X[rows, feature] <= threshold
            return {
                "feature": feature,
                "threshold": threshold,
                "left": build(rows[mask]),
                "right": build(rows[~mask]),
            }

        self.nodes = build(np.arange(n))
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = []
        for row in X:
            node = self.nodes
            while "feature" in node:
                node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
            counts = np.array(node["counts"])
            out.append(counts / counts.sum())
        return np.array(out)


class RandomForest:
    name = "rf"

    def __init__(self, n_trees: int = N_TREES):
        self.n_trees = n_trees
        self.trees: list[DecisionTree] = []
        self.n_classes = 0

    def fit(self, X, y, n_classes: int, seed: int = 0) -> "RandomForest":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        n, d = X.shape
        self.n_classes = n_classes
        max_features = max(1, int(math.sqrt(d)))
        master = np.random.default_rng(seed)
        tree_seeds = master.integers(0, 2**63 - 1, size=self.n_trees)
        self.trees = []
        for tree_seed in tree_seeds:
            rng = np.random.default_rng(int(tree_seed))
            bootstrap = rng.integers(0, n, size=n)
            tree = DecisionTree(max_features, seed=int(rng.integers(0, 2**63 - 1)))
            tree.fit(X[bootstrap], y[bootstrap], n_classes)
            self.trees.append(tree)
        return self

    def decision_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        probs = np.zeros((X.shape[0], self.n_classes))
        for tree in self.trees:
            probs += tree.predict_proba(X)
        return probs / len(self.trees)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def get_params(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "n_classes": self.n_classes,
            "trees": [
                {"max_features": t.max_features, "seed": t.seed, "nodes": t.nodes}
                for t in self.trees
            ],
        }

    @classmethod
    def from_params(cls, params: dict) -> "RandomForest":
        model = cls(n_trees=params["n_trees"])
        model.n_classes = params["n_classes"]
        model.trees = []
        for row in params["trees"]:
            tree = DecisionTree(row["max_features"], row["seed"])
            tree.nodes = row["nodes"]
            model.trees.append(tree)
        return model
