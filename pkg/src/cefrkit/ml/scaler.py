"""Feature standardization fitted on training rows only."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ScalerError(Exception):
    pass


@dataclass
class Scaler:
    mean: np.ndarray
    scale: np.ndarray          # 1.0 for constant columns (passthrough)
    constant: np.ndarray       # bool flags for sigma = 0 columns

    @classmethod
    def fit(cls, X: np.ndarray) -> "Scaler":
        X = np.asarray(X, dtype=float)
        if X.shape[0] == 0:
            raise ScalerError("cannot fit a scaler on an empty training set")
        mean = X.mean(axis=0)
        sigma = X.std(axis=0)
        constant = sigma == 0.0
        scale = np.where(constant, 1.0, sigma)
        return cls(mean=mean, scale=scale, constant=constant)

    def apply(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = (X - self.mean) / self.scale
        if self.constant.any():
            # constant training columns pass through unchanged
            out[:, self.constant] = X[:, self.constant]
        return out

    def subset(self, indices: list[int]) -> "Scaler":
        idx = np.asarray(indices, dtype=int)
        return Scaler(self.mean[idx], self.scale[idx], self.constant[idx])
