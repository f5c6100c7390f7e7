import numpy as np
import pytest

from cefrkit.matrix import FeatureMatrix
from cefrkit.stats.relevance import AuditConfig, audit_relevance

DESIGN = {
    "A2": [("personal_letter", 105), ("narrative", 45)],
    "B1": [("personal_letter", 75), ("narrative", 75)],
    "B2": [("personal_letter", 50), ("semi_formal_letter", 50), ("argumentative", 50)],
    "C1": [("argumentative", 150)],
}


def build_matrix(rng, extra=None):
    levels, types = [], []
    for level, groups in DESIGN.items():
        for text_type, count in groups:
            levels += [level] * count
            types += [text_type] * count
    n = len(levels)
    ordinal = np.array([["A2", "B1", "B2", "C1"].index(l) for l in levels], dtype=float)
    personal = np.array([t == "personal_letter" for t in types], dtype=float)

    columns = {
        "monotone": ordinal + rng.normal(0, 0.1, n),
        "genre_flag": personal + rng.normal(0, 0.01, n),
        "genre_flat": np.array(
            [{"personal_letter": 3.0, "narrative": 0.5, "semi_formal_letter": 3.0, "argumentative": 1.0}[t] for t in types]
        )
        + rng.normal(0, 0.3, n),
        "exc_a": np.array([[5.0, 8.0, 11.0, 9.0][int(o)] for o in ordinal])
        + rng.normal(0, 0.3, n),
        "exc_b": np.array([[10.0, 14.0, 18.0, 22.0][int(o)] for o in ordinal])
        + np.where(
            (ordinal == 0) & (personal == 1),
            2.0,
            np.where((ordinal == 0) & (personal == 0), -2.0, 0.0),
        )
        + rng.normal(0, 0.5, n),
        "noise": rng.normal(0, 1, n),
    }
    if extra:
        columns.update(extra)
    feature_ids = list(columns)
    values = np.column_stack([columns[f] for f in feature_ids])
    return FeatureMatrix(
        feature_ids,
        [f"d{i}" for i in range(n)],
        levels,
        types,
        ["train"] * n,
        values,
    )


@pytest.fixture
def matrix(rng):
    return build_matrix(rng)


def by_id(verdicts):
    return {v.feature_id: v for v in verdicts}


def test_planted_monotone_feature_relevant_via_main_rule(matrix):
    verdicts = by_id(audit_relevance(matrix))
    v = verdicts["monotone"]
    assert v.relevant
    assert v.rationale == "main rule"
    assert v.spearman_rho > 0.9
    assert v.monotonic
    assert all(v.adjacent_significant.values())


def test_planted_genre_features_not_relevant(matrix):
    verdicts = by_id(audit_relevance(matrix))
    for fid in ("genre_flag", "genre_flat"):
        v = verdicts[fid]
        assert not v.relevant, fid
        assert any(v.text_type_variation.values()), fid


def test_pure_noise_not_relevant(matrix):
    verdicts = by_id(audit_relevance(matrix))
    v = verdicts["noise"]
    assert not v.relevant
    assert abs(v.spearman_rho) < 0.2


def test_exception_a_path(matrix):
    v = by_id(audit_relevance(matrix))["exc_a"]
    assert v.relevant
    assert v.rationale.startswith("exception A")
    assert not v.monotonic


def test_exception_b_path(matrix):
    v = by_id(audit_relevance(matrix))["exc_b"]
    assert v.relevant
    assert v.rationale.startswith("exception B")
    assert v.monotonic
    assert v.text_type_variation["A2"]
    assert not v.text_type_variation["B1"]


def test_threshold_literal_and_exact_modes():
    literal = AuditConfig()
    assert literal.threshold == pytest.approx(0.0003)
    exact = AuditConfig(literal_threshold=False)
    assert exact.threshold == pytest.approx(0.05 / 148, abs=1e-12)
    assert exact.threshold == pytest.approx(3.378e-4, abs=1e-6)


def test_missing_level_is_an_error(matrix):
    reduced = matrix.subset_rows(np.array([l != "C1" for l in matrix.levels]))
    with pytest.raises(ValueError, match="C1"):
        audit_relevance(reduced)


def test_row_shuffle_does_not_change_verdicts(matrix, rng):
    baseline = audit_relevance(matrix)
    perm = rng.permutation(matrix.n_docs)
    shuffled = FeatureMatrix(
        matrix.feature_ids,
        [matrix.doc_ids[i] for i in perm],
        [matrix.levels[i] for i in perm],
        [matrix.text_types[i] for i in perm],
        [matrix.splits[i] for i in perm],
        matrix.values[perm],
    )
    again = audit_relevance(shuffled)
    for a, b in zip(baseline, again):
        assert a.relevant == b.relevant
        assert a.rationale == b.rationale
        assert a.anova_p == pytest.approx(b.anova_p, rel=1e-9)


def test_monotonicity_and_correlation_invariant_under_increasing_rescale(rng):
    matrix = build_matrix(rng)
    base = by_id(audit_relevance(matrix))["monotone"]
    transformed = build_matrix(
        rng, extra={"monotone": np.exp(matrix.column("monotone") / 4.0)}
    )
    # overwrite with the transform of the same column
    idx = transformed.feature_ids.index("monotone")
    transformed.values[:, idx] = np.exp(matrix.column("monotone") / 4.0)
    after = by_id(audit_relevance(transformed))["monotone"]
    assert after.monotonic == base.monotonic
    assert after.spearman_rho == pytest.approx(base.spearman_rho, abs=1e-12)


def test_degenerate_rows_excluded_and_counted(rng):
    matrix = build_matrix(rng)
    idx = matrix.feature_ids.index("monotone")
    # knock out some A2 rows for this feature only
    matrix.values[:10, idx] = np.nan
    verdicts = by_id(audit_relevance(matrix))
    v = verdicts["monotone"]
    assert v.n_per_level["A2"] == 140
    assert v.n_per_level["C1"] == 150
    assert v.relevant


def test_insufficient_level_data_yields_untestable_verdict(rng):
    matrix = build_matrix(rng)
    idx = matrix.feature_ids.index("monotone")
    a2_rows = [i for i, l in enumerate(matrix.levels) if l == "A2"]
    matrix.values[a2_rows[:-1], idx] = np.nan  # leave one usable A2 value
    v = by_id(audit_relevance(matrix))["monotone"]
    assert not v.relevant
    assert "insufficient" in v.rationale


def test_bonferroni_guarantee_under_null():
    rng = np.random.default_rng(4242)
    n = 600
    levels = ["A2"] * 150 + ["B1"] * 150 + ["B2"] * 150 + ["C1"] * 150
    types = ["narrative"] * n
    values = rng.normal(0, 1, size=(n, 148))
    matrix = FeatureMatrix(
        [f"null_{i}" for i in range(148)],
        [f"d{i}" for i in range(n)],
        levels,
        types,
        ["train"] * n,
        values,
    )
    verdicts = audit_relevance(matrix)
    passing = sum(1 for v in verdicts if v.anova_p is not None and v.anova_p <= 0.0003)
    assert passing <= 1
