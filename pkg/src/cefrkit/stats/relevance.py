"""Relevance auditor: which features are trustworthy level predictors.

A feature is relevant when (1) Welch's ANOVA over the four levels is
significant at the Bonferroni-corrected threshold and Games-Howell
separates at least one adjacent level pair at p <= 0.05, (2) level means
change monotonically, (3) |Spearman rho| against the ordinal level is at
least 0.2, and (4) no level shows significant text-type variation at the
same corrected threshold. Two exceptions: a non-monotonic feature passes
when there is no text-type variation and the level breaking monotonicity
is separated from all other levels; a feature distinguishing all three
adjacent pairs passes when variation interferes with at most one pair.

Rows flagged degenerate are excluded per feature; the per-level n actually
used is recorded on the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cefrkit.corpus import LEVELS
from cefrkit.matrix import FeatureMatrix
from cefrkit.stats.tests import (
    GroupedSample,
    UndefinedStatisticError,
    games_howell,
    spearman_rho,
    welch_anova,
    welch_t_test,
)

ADJACENT_PAIRS = (("A2", "B1"), ("B1", "B2"), ("B2", "C1"))


@dataclass(frozen=True)
class AuditConfig:
    alpha0: float = 0.05
    denominator: int = 148
    literal_threshold: bool = True  # use the rounded 0.0003 decision rule
    pairwise_alpha: float = 0.05
    min_rho: float = 0.2

    @property
    def threshold(self) -> float:
        return 0.0003 if self.literal_threshold else self.alpha0 / self.denominator


@dataclass
class RelevanceVerdict:
    feature_id: str
    relevant: bool
    rationale: str
    anova_p: float | None = None
    adjacent_significant: dict[str, bool] = field(default_factory=dict)
    pairwise_p: dict[str, float] = field(default_factory=dict)
    monotonic: bool = False
    spearman_rho: float | None = None
    text_type_variation: dict[str, bool] = field(default_factory=dict)
    level_means: dict[str, float] = field(default_factory=dict)
    level_sds: dict[str, float] = field(default_factory=dict)
    n_per_level: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "feature_id": self.feature_id,
            "relevant": self.relevant,
            "rationale": self.rationale,
            "anova_p": self.anova_p,
            "adjacent_significant": self.adjacent_significant,
            "pairwise_p": self.pairwise_p,
            "monotonic": self.monotonic,
            "spearman_rho": self.spearman_rho,
            "text_type_variation": self.text_type_variation,
            "level_means": self.level_means,
            "level_sds": self.level_sds,
            "n_per_level": self.n_per_level,
        }


def _is_monotonic(means: list[float]) -> bool:
    diffs = [b - a for a, b in zip(means, means[1:])]
    return all(d > 0 for d in diffs) or all(d < 0 for d in diffs)


def _break_levels(means: list[float]) -> list[int]:
    """Indices whose removal restores strict monotonicity of the rest."""
    breaks = []
    for skip in range(len(means)):
        rest = [m for i, m in enumerate(means) if i != skip]
        if _is_monotonic(rest):
            breaks.append(skip)
    return breaks


def _type_variation_p(groups: list[tuple[str, np.ndarray]]) -> float | None:
    """p-value for text-type differences within one level; None if untestable."""
    usable = [(label, values) for label, values in groups if len(values) >= 2]
    if len(usable) < 2:
        return None
    try:
        if len(usable) == 2:
            return welch_t_test(usable[0][1], usable[1][1]).p_value
        _, _, _, p = welch_anova(GroupedSample(tuple(usable)))
        return p
    except UndefinedStatisticError:
        means = [float(np.mean(v)) for _, v in usable]
        # constant samples: differing means are maximally significant
        return 0.0 if len(set(means)) > 1 else 1.0


def audit_relevance(matrix: FeatureMatrix, config: AuditConfig | None = None) -> list[RelevanceVerdict]:
    """Audit every feature column of a labeled (training) matrix."""
    config = config or AuditConfig()
    levels_present = set(matrix.levels)
    missing = [lvl for lvl in LEVELS if lvl not in levels_present]
    if missing:
        raise ValueError(f"levels absent from the matrix: {missing}")

    level_arr = np.array(matrix.levels)
    type_arr = np.array(matrix.text_types)
    ordinals = matrix.level_ordinals().astype(float)

    verdicts = []
    for fid in matrix.feature_ids:
        col = matrix.column(fid)
        ok = ~np.isnan(col)
        verdict = RelevanceVerdict(feature_id=fid, relevant=False, rationale="")
        by_level = {lvl: col[ok & (level_arr == lvl)] for lvl in LEVELS}
        verdict.n_per_level = {lvl: int(len(v)) for lvl, v in by_level.items()}

        if any(len(v) < 2 for v in by_level.values()):
            verdict.rationale = "not relevant: insufficient usable values in some level"
            verdicts.append(verdict)
            continue

        sample = GroupedSample(tuple((lvl, by_level[lvl]) for lvl in LEVELS))
        try:
            _, _, _, anova_p = welch_anova(sample)
            pairwise = games_howell(sample)
        except UndefinedStatisticError as exc:
            verdict.rationale = f"not relevant: statistic undefined ({exc})"
            verdicts.append(verdict)
            continue

        verdict.anova_p = float(anova_p)
        verdict.pairwise_p = {f"{a}-{b}": float(r.p_value) for r in pairwise for a, b in [r.pair]}
        verdict.adjacent_significant = {
            f"{a}-{b}": bool(verdict.pairwise_p[f"{a}-{b}"] <= config.pairwise_alpha)
            for a, b in ADJACENT_PAIRS
        }

        means = [float(np.mean(by_level[lvl])) for lvl in LEVELS]
        verdict.level_means = dict(zip(LEVELS, means))
        verdict.level_sds = {
            lvl: float(np.std(by_level[lvl], ddof=1)) for lvl in LEVELS
        }
        verdict.monotonic = _is_monotonic(means)

        try:
            rho = float(spearman_rho(col[ok], ordinals[ok]))
        except UndefinedStatisticError:
            rho = 0.0
        verdict.spearman_rho = rho

        for lvl in LEVELS:
            groups = []
            for text_type in sorted(set(type_arr[ok & (level_arr == lvl)])):
                mask = ok & (level_arr == lvl) & (type_arr == text_type)
                groups.append((text_type, col[mask]))
            p = _type_variation_p(groups)
            verdict.text_type_variation[lvl] = bool(p is not None and p <= config.threshold)

        anova_significant = anova_p <= config.threshold
        some_adjacent = any(verdict.adjacent_significant.values())
        all_adjacent = all(verdict.adjacent_significant.values())
        correlated = abs(rho) >= config.min_rho
        varied_levels = [lvl for lvl in LEVELS if verdict.text_type_variation[lvl]]
        no_variation = not varied_levels

        if anova_significant and some_adjacent and verdict.monotonic and correlated and no_variation:
            verdict.relevant = True
            verdict.rationale = "main rule"
            verdicts.append(verdict)
            continue

        # exception a: non-monotonic allowed when genre-free and the level
        # breaking monotonicity differs from all other levels
        if anova_significant and correlated and no_variation and not verdict.monotonic:
            separated = None
            for idx in _break_levels(means):
                lvl = LEVELS[idx]
                others = [o for o in LEVELS if o != lvl]
                if all(
                    verdict.pairwise_p["-".join(sorted((lvl, o), key=LEVELS.index))]
                    <= config.pairwise_alpha
                    for o in others
                ):
                    separated = lvl
                    break
            if separated is not None:
                verdict.relevant = True
                verdict.rationale = (
                    f"exception A: non-monotonic, no text-type variation, "
                    f"{separated} separated from all other levels"
                )
                verdicts.append(verdict)
                continue

        # exception b: all adjacent pairs distinguished and variation
        # interferes with at most one of them
        if anova_significant and all_adjacent and verdict.monotonic and correlated:
            interfered = {
                f"{a}-{b}"
                for a, b in ADJACENT_PAIRS
                if a in varied_levels or b in varied_levels
            }
            if len(interfered) <= 1:
                which = ", ".join(sorted(interfered)) if interfered else "none"
                verdict.relevant = True
                verdict.rationale = (
                    f"exception B: all adjacent pairs distinguished, "
                    f"variation interferes only with {which}"
                )
                verdicts.append(verdict)
                continue

        failed = []
        if not (anova_significant and some_adjacent):
            failed.append("adjacent-level significance")
        if not verdict.monotonic:
            failed.append("monotonicity")
        if not correlated:
            failed.append("level correlation")
        if varied_levels:
            failed.append(f"text-type variation at {', '.join(varied_levels)}")
        verdict.rationale = "not relevant: failed " + "; ".join(failed)
        verdicts.append(verdict)
    return verdicts
