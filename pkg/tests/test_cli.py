import json
from pathlib import Path

import pytest

from cefrkit.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Small end-to-end workspace: corpus, matrix, audit, models."""
    root = tmp_path_factory.mktemp("cli")
    corpus_dir = root / "corpus"
    assert main(["synth", "--out", str(corpus_dir), "--seed", "42",
                 "--docs-per-level", "25", "--test-docs-per-level", "10"]) == 0

    extract_dir = root / "extract"
    assert main([
        "extract",
        "--manifest", str(corpus_dir / "manifest.json"),
        "--resources", str(corpus_dir / "resources"),
        "--edits", str(corpus_dir / "edits.json"),
        "--out", str(extract_dir),
    ]) == 0

    audit_dir = root / "audit"
    assert main([
        "audit",
        "--matrix", str(extract_dir / "matrix.json"),
        "--out", str(audit_dir),
    ]) == 0

    grid_path = root / "grid.json"
    grid_path.write_text(json.dumps([
        {"classifier": "lr", "selector": "univariate", "k": 3},
        {"classifier": "lda", "selector": "univariate", "k": 5},
    ]))
    train_dir = root / "train"
    assert main([
        "train",
        "--matrix", str(extract_dir / "matrix.json"),
        "--grid", str(grid_path),
        "--seed", "42",
        "--out", str(train_dir),
    ]) == 0
    return {
        "root": root,
        "corpus": corpus_dir,
        "matrix": extract_dir / "matrix.json",
        "audit": audit_dir,
        "train": train_dir,
        "grid": grid_path,
    }


def test_extract_artifacts(workspace):
    matrix = json.loads(workspace["matrix"].read_text())
    assert len(matrix["doc_ids"]) == 4 * 35
    assert (workspace["matrix"].parent / "matrix.tsv").exists()


def test_extract_two_document_fixture(workspace, tmp_path):
    corpus_dir = workspace["corpus"]
    rows = json.loads((corpus_dir / "manifest.json").read_text())[:2]
    small_manifest = tmp_path / "manifest.json"
    small_manifest.write_text(json.dumps(rows))
    out = tmp_path / "out"
    assert main([
        "extract",
        "--manifest", str(small_manifest),
        "--doc-root", str(corpus_dir),
        "--resources", str(corpus_dir / "resources"),
        "--edits", str(corpus_dir / "edits.json"),
        "--out", str(out),
    ]) == 0
    matrix = json.loads((out / "matrix.json").read_text())
    assert len(matrix["doc_ids"]) == 2


def test_audit_writes_reports_and_figure(workspace):
    audit = workspace["audit"]
    for suffix in (".json", ".tsv", ".txt", ".png"):
        assert (audit / f"relevance{suffix}").exists(), suffix
    verdicts = json.loads((audit / "relevance.json").read_text())
    assert any(v["relevant"] for v in verdicts)


def test_train_writes_ranking_and_models(workspace):
    train_dir = workspace["train"]
    assert (train_dir / "pipelines.json").exists()
    assert (train_dir / "pipelines.txt").exists()
    assert (train_dir / "pipelines.png").exists()
    assert (train_dir / "model_best.json").exists()
    ranked = json.loads((train_dir / "pipelines.json").read_text())
    assert 1 <= len(ranked) <= 5


def test_evaluate_and_importance(workspace, tmp_path):
    eval_dir = tmp_path / "eval"
    assert main([
        "evaluate",
        "--model", str(workspace["train"] / "model_best.json"),
        "--matrix", str(workspace["matrix"]),
        "--split", "test1",
        "--out", str(eval_dir),
    ]) == 0
    report = json.loads((eval_dir / "eval.json").read_text())
    assert report["accuracy"] >= 0.8
    assert (eval_dir / "eval.png").exists()

    imp_dir = tmp_path / "imp"
    assert main([
        "importance",
        "--model", str(workspace["train"] / "model_best.json"),
        "--matrix", str(workspace["matrix"]),
        "--split", "test1",
        "--seed", "7",
        "--out", str(imp_dir),
    ]) == 0
    assert (imp_dir / "importance.json").exists()
    assert (imp_dir / "importance.png").exists()


def test_assess_single_document(workspace, tmp_path):
    corpus_dir = workspace["corpus"]
    doc = next((corpus_dir / "docs").glob("test1_B2_*.conllu"))
    out = tmp_path / "assess"
    assert main([
        "assess",
        "--conllu", str(doc),
        "--model", str(workspace["train"] / "model_best.json"),
        "--resources", str(corpus_dir / "resources"),
        "--out", str(out),
    ]) == 0
    result = json.loads((out / "assessment.json").read_text())
    assert result["overall_level"] in ("A2", "B1", "B2", "C1")
    assert "feature_report" in result and result["feature_report"]


def test_annotate_with_stub_table(workspace, tmp_path):
    corpus_dir = workspace["corpus"]
    rows = json.loads((corpus_dir / "manifest.json").read_text())[:2]
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps(rows))
    stub = tmp_path / "stub.json"
    stub.write_text(json.dumps({"speller": {}, "grammar": {}}))
    out = tmp_path / "edits"
    assert main([
        "annotate",
        "--manifest", str(manifest),
        "--doc-root", str(corpus_dir),
        "--stub-table", str(stub),
        "--out", str(out),
    ]) == 0
    edits = json.loads((out / "edits.json").read_text())
    assert all(v == [] for v in edits.values())


def test_train_twice_with_same_seed_is_byte_identical(workspace, tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        assert main([
            "train",
            "--matrix", str(workspace["matrix"]),
            "--grid", str(workspace["grid"]),
            "--seed", "42",
            "--out", str(out),
        ]) == 0
    assert (out_a / "pipelines.json").read_bytes() == (out_b / "pipelines.json").read_bytes()
    assert (out_a / "model_best.json").read_bytes() == (out_b / "model_best.json").read_bytes()


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["no-such-command"])
    assert excinfo.value.code == 2


def test_data_error_exits_1(tmp_path):
    code = main([
        "extract",
        "--manifest", str(tmp_path / "missing.json"),
        "--out", str(tmp_path / "out"),
    ])
    assert code == 1


def test_config_file_supplies_flags(workspace, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "matrix": str(workspace["matrix"]),
        "split": "train",
    }))
    out = tmp_path / "audit"
    assert main(["audit", "--config", str(config), "--matrix", str(workspace["matrix"]), "--out", str(out)]) == 0
    assert (out / "relevance.json").exists()
