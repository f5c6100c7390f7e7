"""Heteroscedasticity-robust group comparison tests and rank correlation.

Sample variance uses the n-1 denominator throughout. Zero-variance
conventions for pairwise tests: both samples constant with equal means
gives p = 1, constant with different means gives p = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from cefrkit.stats.distributions import f_cdf, student_t_cdf, studentized_range_cdf


class UndefinedStatisticError(Exception):
    pass


@dataclass(frozen=True)
class GroupedSample:
    groups: tuple[tuple[str, np.ndarray], ...]

    @classmethod
    def from_lists(cls, groups: list[tuple[str, list[float]]]) -> "GroupedSample":
        return cls(
            groups=tuple((label, np.asarray(values, dtype=float)) for label, values in groups)
        )

    def __post_init__(self) -> None:
        if len(self.groups) < 2:
            raise UndefinedStatisticError("need at least 2 groups")
        for label, values in self.groups:
            if len(values) < 2:
                raise UndefinedStatisticError(
                    f"group {label!r} needs at least 2 values, got {len(values)}"
                )


@dataclass(frozen=True)
class PairwiseResult:
    pair: tuple[str, str]
    statistic: float
    df: float
    p_value: float


def _moments(values: np.ndarray) -> tuple[int, float, float]:
    n = len(values)
    return n, float(np.mean(values)), float(np.var(values, ddof=1))


def welch_anova(sample: GroupedSample) -> tuple[float, float, float, float]:
    """Welch's F*; returns (F, df1, df2, p)."""
    stats = [_moments(values) for _, values in sample.groups]
    k = len(stats)
    if all(var == 0.0 for _, _, var in stats):
        raise UndefinedStatisticError("all groups have zero variance")
    if any(var == 0.0 for _, _, var in stats):
        raise UndefinedStatisticError("a group has zero variance; Welch weights undefined")

    weights = [n / var for n, _, var in stats]
    total_weight = sum(weights)
    grand_mean = sum(w * mean for w, (_, mean, _) in zip(weights, stats)) / total_weight
    between = sum(
        w * (mean - grand_mean) ** 2 for w, (_, mean, _) in zip(weights, stats)
    ) / (k - 1)
    h = sum(
        (1.0 - w / total_weight) ** 2 / (n - 1) for w, (n, _, _) in zip(weights, stats)
    )
    correction = 1.0 + 2.0 * (k - 2) / (k * k - 1.0) * h
    f_star = between / correction
    df1 = float(k - 1)
    df2 = (k * k - 1.0) / (3.0 * h)
    p = 1.0 - f_cdf(df1, df2, f_star)
    return f_star, df1, df2, p


def _welch_terms(a: np.ndarray, b: np.ndarray):
    n1, m1, v1 = _moments(a)
    n2, m2, v2 = _moments(b)
    se2 = v1 / n1 + v2 / n2
    if se2 == 0.0:
        return m1, m2, None, None
    df = se2**2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
    return m1, m2, se2, df


def welch_t_test(a, b, labels: tuple[str, str] = ("a", "b")) -> PairwiseResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise UndefinedStatisticError("each sample needs at least 2 values")
    m1, m2, se2, df = _welch_terms(a, b)
    if se2 is None:
        # both samples constant
        p = 1.0 if m1 == m2 else 0.0
        return PairwiseResult(pair=labels, statistic=0.0 if m1 == m2 else np.inf, df=np.inf, p_value=p)
    t = float((m1 - m2) / np.sqrt(se2))
    p = 2.0 * (1.0 - student_t_cdf(df, abs(t)))
    return PairwiseResult(pair=labels, statistic=t, df=float(df), p_value=float(min(max(p, 0.0), 1.0)))


def games_howell(sample: GroupedSample) -> list[PairwiseResult]:
    """Pairwise comparisons via the studentized range with Welch dof.

    k in the range distribution is the total group count, for every pair.
    """
    k = len(sample.groups)
    results = []
    for (label_i, values_i), (label_j, values_j) in combinations(sample.groups, 2):
        m1, m2, se2, df = _welch_terms(values_i, values_j)
        if se2 is None:
            p = 1.0 if m1 == m2 else 0.0
            results.append(
                PairwiseResult(
                    pair=(label_i, label_j),
                    statistic=0.0 if m1 == m2 else np.inf,
                    df=np.inf,
                    p_value=p,
                )
            )
            continue
        q = float(abs(m1 - m2) * np.sqrt(2.0) / np.sqrt(se2))
        p = 1.0 - studentized_range_cdf(q, k, df)
        results.append(
            PairwiseResult(
                pair=(label_i, label_j),
                statistic=q,
                df=float(df),
                p_value=float(min(max(p, 0.0), 1.0)),
            )
        )
    return results


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    sorted_values = values[order]
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_values[j + 1] == sorted_values[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def pearson_r(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y) or len(x) < 3:
        raise UndefinedStatisticError("need equal-length samples of >= 3 values")
    xd = x - x.mean()
    yd = y - y.mean()
    denom = np.sqrt(np.sum(xd * xd) * np.sum(yd * yd))
    if denom == 0.0:
        raise UndefinedStatisticError("correlation undefined for constant input")
    return float(np.sum(xd * yd) / denom)


def spearman_rho(x, y) -> float:
    """Pearson correlation of average-tie ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y) or len(x) < 3:
        raise UndefinedStatisticError("need equal-length samples of >= 3 values")
    return pearson_r(_average_ranks(x), _average_ranks(y))
