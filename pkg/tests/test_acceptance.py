"""Acceptance suite: one test per release criterion, at stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line
per criterion. The examination-corpus checks are optional and run only
when CEFRKIT_EIC_MATRIX points at an extracted feature matrix of that
corpus (it cannot be redistributed with the package).
"""

import json
import math
import os
import time
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient
from scipy.stats import kstest, spearmanr, studentized_range, ttest_ind
from statsmodels.stats.oneway import anova_oneway

from cefrkit.catalog import default_catalog
from cefrkit.corpus import Document, LEVELS, Sentence, Token, load_corpus
from cefrkit.errors import EditAnnotationSet
from cefrkit.features.lexical import compute_diversity, mtld
from cefrkit.matrix import FeatureMatrix, extract_features
from cefrkit.ml.linear import LogisticRegression
from cefrkit.ml.neural import MLP
from cefrkit.ml.persist import save_model
from cefrkit.ml.pipeline import (
    PipelineSpec,
    evaluate,
    permutation_importance,
    rank_pipelines,
    train,
)
from cefrkit.reports import write_eval_report, write_importance_report, write_ranking_report
from cefrkit.resources import load_resources
from cefrkit.service import ServiceConfig, create_app
from cefrkit.stats.distributions import studentized_range_ppf
from cefrkit.stats.relevance import AuditConfig, audit_relevance
from cefrkit.stats.tests import (
    GroupedSample,
    games_howell,
    spearman_rho,
    welch_anova,
    welch_t_test,
)
from cefrkit.synthetic import PLANTS, generate_corpus


def ok(name: str) -> None:
    print(f"\nACCEPTANCE PASS: {name}")


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="module")
def synthetic(tmp_path_factory):
    """The bundled synthetic corpus at full size, extracted and audited."""
    root = tmp_path_factory.mktemp("acceptance")
    paths = generate_corpus(root / "corpus", seed=42, docs_per_level=150, test_docs_per_level=30)
    corpus = load_corpus(paths["manifest"])
    res = load_resources(paths["resources"])
    edits = EditAnnotationSet.load(paths["edits"])
    matrix = extract_features(corpus, default_catalog(), res, edits)
    return {
        "root": root,
        "paths": paths,
        "resources": res,
        "matrix": matrix,
        "train": matrix.subset_split("train"),
        "test": matrix.subset_split("test1"),
    }


# ------------------------------------------------- 1. formula oracle suite

def _doc_from_lemmas(lemmas):
    tokens = tuple(
        Token(index=i + 1, form=l, lemma=l, upos="VERB" if l.startswith("v") else "NOUN")
        for i, l in enumerate(lemmas)
    )
    return Document(doc_id="seq", sentences=(Sentence(tokens=tokens),))


def _brute_mtld_pass(lemmas, threshold=0.72):
    factors = 0.0
    start = 0
    for i in range(len(lemmas)):
        segment = lemmas[start : i + 1]
        if len(set(segment)) / len(segment) <= threshold:
            factors += 1.0
            start = i + 1
    if start < len(lemmas):
        segment = lemmas[start:]
        factors += (1.0 - len(set(segment)) / len(segment)) / (1.0 - threshold)
    return factors


def test_formula_oracle_suite():
    rng = np.random.default_rng(20240601)
    started = time.perf_counter()
    for _ in range(200):
        n = int(rng.integers(5, 501))
        vocab_size = int(rng.integers(2, max(3, n)))
        vocab = [("v" if rng.random() < 0.3 else "w") + str(i) for i in range(vocab_size)]
        lemmas = [vocab[i] for i in rng.integers(0, vocab_size, size=n)]
        doc = _doc_from_lemmas(lemmas)
        values = compute_diversity(doc)

        t_count = len(set(lemmas))
        assert values["ttr"] == pytest.approx(t_count / n, abs=1e-12)
        assert values["rttr"] == pytest.approx(t_count / math.sqrt(n), abs=1e-12)
        if t_count == n:
            assert values["uber"] is None and values["maas"] is None
        else:
            log_n, log_t = math.log(n), math.log(t_count)
            assert values["uber"] == pytest.approx(log_n**2 / (log_n - log_t), abs=1e-12)
            assert values["maas"] == pytest.approx((log_n - log_t) / log_n**2, abs=1e-12)
        verbs = [l for l in lemmas if l.startswith("v")]
        if verbs:
            expected_cvv = len(set(verbs)) / math.sqrt(2 * len(verbs))
            assert values["cvv"] == pytest.approx(expected_cvv, abs=1e-12)
        else:
            assert values["cvv"] is None

        forward = _brute_mtld_pass(lemmas)
        backward = _brute_mtld_pass(lemmas[::-1])
        if forward == 0.0 or backward == 0.0:
            assert values["mtld"] is None
        else:
            expected = (n / forward + n / backward) / 2.0
            assert values["mtld"] == expected  # exact factor-count agreement
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"formula suite took {elapsed:.2f}s"
    ok(f"formula oracle suite (200 sequences, {elapsed:.2f}s)")


# --------------------------------------------------- 2. statistics suite

def _stat_fixtures():
    rng = np.random.default_rng(77)
    fixtures = []
    for _ in range(20):
        k = int(rng.integers(2, 6))
        groups = [
            (f"g{j}", rng.normal(rng.normal(0, 2), rng.uniform(0.3, 3.0), size=int(rng.integers(5, 40))))
            for j in range(k)
        ]
        fixtures.append(groups)
    return fixtures


def test_statistics_suite():
    for groups in _stat_fixtures():
        sample = GroupedSample(tuple(groups))
        if len(groups) >= 3:
            f_stat, _, df2, p = welch_anova(sample)
            ref = anova_oneway([g for _, g in groups], use_var="unequal", welch_correction=True)
            assert f_stat == pytest.approx(ref.statistic, abs=1e-6)
            assert p == pytest.approx(ref.pvalue, abs=1e-6)

        a, b = groups[0][1], groups[1][1]
        mine = welch_t_test(a, b)
        ref_t = ttest_ind(a, b, equal_var=False)
        assert mine.statistic == pytest.approx(ref_t.statistic, abs=1e-6)
        assert mine.p_value == pytest.approx(ref_t.pvalue, abs=1e-6)

        k = len(groups)
        for result in games_howell(sample):
            (la, a), (lb, b) = [g for g in groups if g[0] == result.pair[0]][0], [
                g for g in groups if g[0] == result.pair[1]
            ][0]
            na, nb = len(a), len(b)
            va, vb = np.var(a, ddof=1), np.var(b, ddof=1)
            se2 = va / na + vb / nb
            q = abs(np.mean(a) - np.mean(b)) * np.sqrt(2.0) / np.sqrt(se2)
            df = se2**2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
            assert result.p_value == pytest.approx(float(studentized_range.sf(q, k, df)), abs=1e-4)

        x = np.concatenate([a, b])
        y = np.arange(len(x)) + np.round(x, 1)
        assert spearman_rho(x, y) == pytest.approx(spearmanr(x, y).statistic, abs=1e-6)

    assert studentized_range_ppf(0.95, 3, 10) == pytest.approx(3.88, abs=0.01)

    rng = np.random.default_rng(991)
    p_values = []
    for _ in range(1000):
        null_groups = [(f"g{j}", rng.normal(0.0, 1.0, size=30)) for j in range(4)]
        _, _, _, p = welch_anova(GroupedSample(tuple(null_groups)))
        p_values.append(p)
    ks = kstest(p_values, "uniform").statistic
    assert ks <= 0.05, f"null p-values not uniform (KS={ks:.4f})"
    ok(f"statistics suite (20 fixtures, quantile 3.88, null KS={ks:.4f})")


# --------------------------------------------------- 3. bonferroni rule

def test_bonferroni_rule():
    literal = AuditConfig(alpha0=0.05, denominator=148, literal_threshold=True)
    assert literal.threshold == 0.0003
    exact = AuditConfig(alpha0=0.05, denominator=148, literal_threshold=False)
    assert exact.threshold == 0.05 / 148
    assert exact.threshold == pytest.approx(3.378e-4, abs=1e-6)
    ok("bonferroni rule (literal 0.0003, exact 0.05/148)")


# --------------------------------------- 4. relevance audit on synthetic

def test_relevance_audit_on_synthetic_corpus(synthetic):
    train_matrix = synthetic["train"]
    assert train_matrix.n_docs == 600
    started = time.perf_counter()
    verdicts = {v.feature_id: v for v in audit_relevance(train_matrix)}
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"audit took {elapsed:.1f}s"

    monotone = PLANTS["monotone"]
    judged_relevant = [fid for fid in monotone if verdicts[fid].relevant]
    share = len(judged_relevant) / len(monotone)
    assert share >= 0.95, f"only {share:.0%} of planted monotone features relevant"

    for fid in PLANTS["genre_only"]:
        assert not verdicts[fid].relevant, f"{fid} wrongly judged relevant"

    assert any(
        verdicts[fid].relevant and verdicts[fid].rationale.startswith("exception A")
        for fid in PLANTS["exception_a"]
    ), "exception A never fired"
    assert any(
        verdicts[fid].relevant and verdicts[fid].rationale.startswith("exception B")
        for fid in PLANTS["exception_b"]
    ), "exception B never fired"
    ok(
        f"relevance audit ({share:.0%} monotone kept, genre-only rejected, "
        f"exceptions A+B fired, {elapsed:.1f}s)"
    )


# ------------------------------------------------ 5. end-to-end pipeline

def _run_pipeline_reports(synthetic, out_dir: Path) -> dict:
    train_matrix = synthetic["train"]
    test_matrix = synthetic["test"]
    verdicts = audit_relevance(train_matrix)
    relevant = [v.feature_id for v in verdicts if v.relevant]
    grid = [
        PipelineSpec(classifier="lr", selector="univariate", k=5, feature_pool="relevant_only", seed=42),
        PipelineSpec(classifier="lr", selector="univariate", k=23, feature_pool="relevant_only", seed=42),
        PipelineSpec(classifier="lda", selector="univariate", k=10, feature_pool="relevant_only", seed=42),
        PipelineSpec(classifier="svm", selector="univariate", k=23, feature_pool="relevant_only", seed=42),
    ]
    ranked = rank_pipelines(train_matrix, grid, folds=10, relevant_ids=relevant)
    best = ranked[0]
    model = train(train_matrix, best.spec, relevant_ids=relevant)
    report = evaluate(model, test_matrix)

    full_spec = PipelineSpec(
        classifier="lr", selector="univariate", k=train_matrix.n_features, seed=42
    )
    full_model = train(train_matrix, full_spec)
    importance = permutation_importance(full_model, test_matrix, metric="accuracy", repeats=10, seed=42)

    write_ranking_report(ranked, out_dir)
    write_eval_report(report, out_dir)
    write_importance_report(importance, out_dir)
    return {"ranked": ranked, "eval": report, "importance": importance}


def test_end_to_end_pipeline(synthetic, tmp_path):
    first = _run_pipeline_reports(synthetic, tmp_path / "run1")
    report = first["eval"]
    assert report.accuracy >= 0.9, f"holdout accuracy {report.accuracy:.3f}"
    assert report.within_one_level_accuracy >= 0.98

    for fid in PLANTS["noise"]:
        drop = first["importance"].features[fid]["mean_drop"]
        assert abs(drop) <= 0.02, f"noise feature {fid} drop {drop:+.3f}"

    second = _run_pipeline_reports(synthetic, tmp_path / "run2")
    for name in ("pipelines.json", "eval.json", "importance.json", "pipelines.txt", "eval.txt"):
        a = (tmp_path / "run1" / name).read_bytes()
        b = (tmp_path / "run2" / name).read_bytes()
        assert a == b, f"report {name} differs between identical runs"
    ok(
        f"end-to-end pipeline (top={first['ranked'][0].spec.label()} "
        f"acc={report.accuracy:.3f}, within-one={report.within_one_level_accuracy:.3f}, "
        "byte-identical reruns)"
    )


# --------------------------------------------------- 6. gradient checks

def test_gradient_checks():
    rng = np.random.default_rng(8)
    centers = np.array([[0, 0, 0], [4, 0, 0], [0, 4, 0], [4, 4, 0]], dtype=float)
    X = np.vstack([rng.normal(c, 1.0, size=(25, 3)) for c in centers])
    y = np.repeat(np.arange(4), 25)
    lr = LogisticRegression().fit(X, y, 4)
    grad_norm = lr.gradient_max_norm(X, y)
    assert grad_norm <= 1e-5, f"lr gradient max-norm {grad_norm:.2e}"

    Xs = rng.normal(size=(5, 3))
    ys = np.array([0, 1, 2, 3, 1])
    onehot = np.zeros((5, 4))
    onehot[np.arange(5), ys] = 1.0
    params = MLP(hidden_units=6)._init_params(3, 4, np.random.default_rng(1))
    _, grads = MLP.loss_and_gradients(params, Xs, onehot)
    worst = 0.0
    step = 1e-6
    for key in params:
        flat = params[key].ravel()
        for idx in range(flat.size):
            original = flat[idx]
            flat[idx] = original + step
            up, _ = MLP.loss_and_gradients(params, Xs, onehot)
            flat[idx] = original - step
            down, _ = MLP.loss_and_gradients(params, Xs, onehot)
            flat[idx] = original
            numeric = (up - down) / (2 * step)
            analytic = grads[key].ravel()[idx]
            if abs(numeric) > 1e-7:
                worst = max(worst, abs(analytic - numeric) / abs(numeric))
    assert worst <= 1e-4, f"mlp gradient relative error {worst:.2e}"
    ok(f"gradient checks (lr grad {grad_norm:.1e}, mlp FD rel err {worst:.1e})")


# --------------------------------------------------- 7. service contract

@pytest.fixture(scope="module")
def service_client(synthetic):
    root = synthetic["root"]
    train_matrix = synthetic["train"]
    catalog = default_catalog()
    mixed = train(train_matrix, PipelineSpec(classifier="lr", selector="univariate", k=8, seed=42))
    save_model(mixed, root / "mixed.json")
    category_models = {}
    for category in ("lexical", "morphological", "surface"):
        ids = [f.id for f in catalog.by_category(category)]
        model = train(
            train_matrix.subset_features(ids),
            PipelineSpec(classifier="lda", selector="univariate", k=5, seed=42),
        )
        save_model(model, root / f"{category}.json")
        category_models[category] = str(root / f"{category}.json")
    config = ServiceConfig(
        mixed_model=str(root / "mixed.json"),
        resources=synthetic["paths"]["resources"],
        category_models=category_models,
    )
    return TestClient(create_app(config))


def test_service_contract(service_client):
    from importlib import resources as importlib_resources

    sample = importlib_resources.files("cefrkit.data").joinpath("sample.conllu").read_text("utf-8")
    response = service_client.post("/assess", json={"conllu": sample})
    assert response.status_code == 200
    body = response.json()
    assert body["overall_level"] in LEVELS
    assert set(body["sub_levels"]) == {"lexical", "morphological", "surface"}
    assert body["feature_report"]

    assert service_client.post("/assess", json={"wrong": 1}).status_code == 400
    assert service_client.post("/assess", json={"conllu": ""}).status_code == 422

    repeat = service_client.post("/assess", json={"conllu": sample})
    assert repeat.content == response.content
    ok(
        f"service contract (overall={body['overall_level']}, "
        f"sub-ratings={body['sub_levels']}, 400/422/deterministic)"
    )


# ------------------------------- 8. optional corpus-dependent checks (EIC)

EIC_MATRIX = os.environ.get("CEFRKIT_EIC_MATRIX")

# published training-set statistics for the examination corpus
EIC_LEXICAL_MEANS = {
    "lemma_count": {"A2": (33.5, 7.8), "B1": (64.9, 11.0), "B2": (99.6, 18.0), "C1": (147.3, 23.4)},
    "rttr": {"A2": (4.7, 0.6), "B1": (5.9, 0.7), "B2": (7.2, 0.8), "C1": (9.1, 1.0)},
    "cvv": {"A2": (1.6, 0.4), "B1": (2.1, 0.4), "B2": (2.45, 0.4), "C1": (2.9, 0.4)},
}
EIC_LEMMA_COUNT_RHO = 0.949


@pytest.mark.skipif(
    EIC_MATRIX is None,
    reason="examination corpus not supplied (set CEFRKIT_EIC_MATRIX to an extracted matrix)",
)
def test_eic_corpus_checks():
    matrix = FeatureMatrix.load(EIC_MATRIX)
    train_matrix = matrix.subset_split("train")
    levels = np.array(train_matrix.levels)
    for fid, stats in EIC_LEXICAL_MEANS.items():
        col = train_matrix.column(fid)
        for level, (mean, sd) in stats.items():
            got = np.nanmean(col[levels == level])
            assert abs(got - mean) <= sd, f"{fid}@{level}: {got:.2f} vs {mean} +- {sd}"

    col = train_matrix.column("lemma_count")
    mask = ~np.isnan(col)
    ordinals = train_matrix.level_ordinals().astype(float)
    rho = spearman_rho(col[mask], ordinals[mask])
    assert abs(rho - EIC_LEMMA_COUNT_RHO) <= 0.03

    verdicts = audit_relevance(train_matrix)
    relevant = [v.feature_id for v in verdicts if v.relevant]
    spec = PipelineSpec(classifier="svm", selector="univariate", k=23, feature_pool="relevant_only", seed=42)
    model = train(train_matrix, spec, relevant_ids=relevant)
    report = evaluate(model, matrix, split="test1")
    assert report.accuracy >= 0.9
    ok(f"examination-corpus checks (lemma-count rho={rho:.3f}, acc={report.accuracy:.3f})")
