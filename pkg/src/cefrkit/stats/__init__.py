"""Statistical kernel and the feature-relevance auditor."""

from cefrkit.stats.distributions import (
    dist_cdf,
    f_cdf,
    student_t_cdf,
    studentized_range_cdf,
    studentized_range_ppf,
)
from cefrkit.stats.tests import (
    GroupedSample,
    PairwiseResult,
    UndefinedStatisticError,
    games_howell,
    pearson_r,
    spearman_rho,
    welch_anova,
    welch_t_test,
)
from cefrkit.stats.relevance import AuditConfig, RelevanceVerdict, audit_relevance

__all__ = [
    "dist_cdf",
    "f_cdf",
    "student_t_cdf",
    "studentized_range_cdf",
    "studentized_range_ppf",
    "GroupedSample",
    "PairwiseResult",
    "UndefinedStatisticError",
    "games_howell",
    "pearson_r",
    "spearman_rho",
    "welch_anova",
    "welch_t_test",
    "AuditConfig",
    "RelevanceVerdict",
    "audit_relevance",
]
