"""Stratified fold assignment with seeded shuffling."""

from __future__ import annotations

import numpy as np


class FoldError(Exception):
    pass


def stratified_folds(y: np.ndarray, n_folds: int, seed: int) -> list[np.ndarray]:
    """Row indices per fold; every class is spread across all folds."""
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if len(idx) < n_folds:
            raise FoldError(
                f"class {cls!r} has {len(idx)} rows; cannot stratify into "
                f"{n_folds} folds"
            )
        idx = idx.copy()
        rng.shuffle(idx)
        for position, row in enumerate(idx):
            folds[position % n_folds].append(int(row))
    return [np.array(sorted(f), dtype=int) for f in folds]
