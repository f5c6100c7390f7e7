"""Command-line entry point.

Commands: synth (bundled synthetic corpus), extract, audit, train,
evaluate, importance, assess, annotate, serve. Every command writes JSON
artifacts plus human-readable tables, and report paths also render PNG
figures. All randomness derives from --seed. A JSON config file can
mirror the flags; explicitly passed flags win.

Exit codes: 0 success, 1 data error (message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cefrkit.assessment import AssessmentError, assess_document
from cefrkit.catalog import CatalogError, load_catalog
from cefrkit.corpus import CorpusError, load_corpus, load_document
from cefrkit.errors import (
    CorrectorClient,
    CorrectorTransportError,
    EditAnnotationSet,
    EditValidationError,
    StubCorrectorClient,
    fetch_edits,
)
from cefrkit.features.lexical import FeatureError
from cefrkit.matrix import FeatureMatrix, MatrixError, extract_features
from cefrkit.ml.folds import FoldError
from cefrkit.ml.persist import ModelIOError, load_model, save_model
from cefrkit.ml.pipeline import (
    PipelineError,
    PipelineSpec,
    cross_validate,
    evaluate,
    permutation_importance,
    rank_pipelines,
    train,
)
from cefrkit.ml.scaler import ScalerError
from cefrkit.ml.selection import SelectionError
from cefrkit.reports import (
    write_eval_report,
    write_importance_report,
    write_ranking_report,
    write_relevance_report,
)
from cefrkit.resources import ResourceError, load_resources
from cefrkit.stats.relevance import AuditConfig, audit_relevance
from cefrkit.stats.tests import UndefinedStatisticError
from cefrkit.synthetic import generate_corpus

DATA_ERRORS = (
    CorpusError,
    CatalogError,
    ResourceError,
    MatrixError,
    EditValidationError,
    CorrectorTransportError,
    FeatureError,
    PipelineError,
    SelectionError,
    ScalerError,
    FoldError,
    ModelIOError,
    UndefinedStatisticError,
    AssessmentError,
    FileNotFoundError,
    ValueError,
)


def _merge_config(args: argparse.Namespace, parser_defaults: dict) -> argparse.Namespace:
    """Fill unset flags from the JSON config file; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    for key, value in config.items():
        key = key.replace("-", "_")
        if hasattr(args, key) and getattr(args, key) == parser_defaults.get(key):
            setattr(args, key, value)
    return args


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_matrix(path: str) -> FeatureMatrix:
    return FeatureMatrix.load(path)


def _audit_config(args) -> AuditConfig:
    return AuditConfig(
        alpha0=args.alpha,
        denominator=args.bonferroni_denominator,
        literal_threshold=args.literal_threshold,
    )


def cmd_synth(args) -> int:
    paths = generate_corpus(
        args.out,
        seed=args.seed,
        docs_per_level=args.docs_per_level,
        test_docs_per_level=args.test_docs_per_level,
    )
    print(json.dumps(paths, indent=1))
    return 0


def cmd_extract(args) -> int:
    catalog = load_catalog(args.catalog)
    corpus = load_corpus(args.manifest, args.doc_root)
    res = load_resources(args.resources) if args.resources else None
    edits = EditAnnotationSet.load(args.edits) if args.edits else None
    matrix = extract_features(corpus, catalog, res, edits)
    out = _out_dir(args)
    matrix.save(out / "matrix.json")
    (out / "matrix.tsv").write_text(matrix.to_tsv(), encoding="utf-8")
    print(f"wrote {out / 'matrix.json'} ({matrix.n_docs} docs x {matrix.n_features} features)")
    return 0


def cmd_audit(args) -> int:
    matrix = _load_matrix(args.matrix).subset_split(args.split)
    if matrix.n_docs == 0:
        raise MatrixError(f"no rows in split {args.split!r}")
    verdicts = audit_relevance(matrix, _audit_config(args))
    paths = write_relevance_report(verdicts, _out_dir(args))
    relevant = [v.feature_id for v in verdicts if v.relevant]
    print(f"{len(relevant)} of {len(verdicts)} features relevant")
    for path in paths:
        print(f"wrote {path}")
    return 0


def _read_grid(path: str, seed: int) -> list[PipelineSpec]:
    with open(path, encoding="utf-8") as fh:
        rows = json.load(fh)
    return [
        PipelineSpec(
            classifier=row["classifier"],
            selector=row["selector"],
            k=row.get("k"),
            feature_pool=row.get("feature_pool", "all"),
            seed=seed,
        )
        for row in rows
    ]


def _relevant_ids(path: str | None) -> list[str] | None:
    if not path:
        return None
    with open(path, encoding="utf-8") as fh:
        verdicts = json.load(fh)
    return [v["feature_id"] for v in verdicts if v["relevant"]]


def cmd_train(args) -> int:
    matrix = _load_matrix(args.matrix).subset_split(args.split)
    grid = _read_grid(args.grid, args.seed)
    relevant = _relevant_ids(args.relevance)
    ranked = rank_pipelines(matrix, grid, folds=args.folds, relevant_ids=relevant)
    out = _out_dir(args)
    paths = write_ranking_report(ranked, out)
    models_dir = out / "models"
    models_dir.mkdir(exist_ok=True)
    for i, entry in enumerate(ranked):
        model = train(matrix, entry.spec, relevant_ids=relevant)
        name = f"rank{i + 1}_{entry.spec.label()}.json"
        save_model(model, models_dir / name)
        if i == 0:
            save_model(model, out / "model_best.json")
        print(f"wrote {models_dir / name}")
    for path in paths:
        print(f"wrote {path}")
    return 0


def cmd_cv(args) -> int:
    matrix = _load_matrix(args.matrix).subset_split(args.split)
    spec = PipelineSpec(
        classifier=args.classifier,
        selector=args.selector,
        k=args.k,
        feature_pool="relevant_only" if args.relevance else "all",
        seed=args.seed,
    )
    report = cross_validate(matrix, spec, folds=args.folds, relevant_ids=_relevant_ids(args.relevance))
    print(json.dumps(report.to_json(), indent=1))
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    matrix = _load_matrix(args.matrix)
    report = evaluate(model, matrix, split=args.split)
    for path in write_eval_report(report, _out_dir(args)):
        print(f"wrote {path}")
    return 0


def cmd_importance(args) -> int:
    model = load_model(args.model)
    matrix = _load_matrix(args.matrix)
    if args.split:
        matrix = matrix.subset_split(args.split)
    report = permutation_importance(
        model, matrix, metric=args.metric, repeats=args.repeats, seed=args.seed
    )
    for path in write_importance_report(report, _out_dir(args)):
        print(f"wrote {path}")
    return 0


def cmd_assess(args) -> int:
    catalog = load_catalog(args.catalog)
    res = load_resources(args.resources)
    mixed = load_model(args.model, expected_catalog_hash=catalog.version_hash())
    category_models = {}
    for category, path in (
        ("lexical", args.lexical_model),
        ("morphological", args.morphological_model),
        ("surface", args.surface_model),
    ):
        if path:
            category_models[category] = load_model(path, expected_catalog_hash=catalog.version_hash())
    doc = load_document(Path(args.conllu), doc_id=Path(args.conllu).stem)
    edits = None
    if args.edits:
        edits = EditAnnotationSet.load(args.edits).edits_for(doc.doc_id)
    result = assess_document(
        doc, catalog, res, mixed, category_models, edits=edits,
        model_ids={"mixed": args.model, **{k: p for k, p in (("lexical", args.lexical_model), ("morphological", args.morphological_model), ("surface", args.surface_model)) if p}},
    )
    payload = json.dumps(result, ensure_ascii=False, indent=1)
    if args.out:
        out = _out_dir(args)
        (out / "assessment.json").write_text(payload + "\n", encoding="utf-8")
        print(f"wrote {out / 'assessment.json'}")
    else:
        print(payload)
    return 0


def cmd_annotate(args) -> int:
    corpus = load_corpus(args.manifest, args.doc_root)
    clients = []
    if args.stub_table:
        with open(args.stub_table, encoding="utf-8") as fh:
            table = json.load(fh)
        for tool in ("speller", "grammar"):
            if tool in table:
                clients.append(StubCorrectorClient(tool=tool, table=table[tool]))
    if args.speller_url:
        clients.append(CorrectorClient(endpoint=args.speller_url, tool="speller", timeout=args.timeout))
    if args.grammar_url:
        clients.append(CorrectorClient(endpoint=args.grammar_url, tool="grammar", timeout=args.timeout))
    if not clients:
        raise ValueError("annotate needs --speller-url/--grammar-url or --stub-table")
    annotation_set = EditAnnotationSet()
    for doc in corpus:
        edits = []
        for client in clients:
            edits.extend(fetch_edits(doc, client))
        annotation_set.set_edits(doc.doc_id, edits)
    out = _out_dir(args)
    annotation_set.save(out / "edits.json")
    print(f"wrote {out / 'edits.json'}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from cefrkit.service import ServiceConfig, create_app

    category_models = {}
    for category, path in (
        ("lexical", args.lexical_model),
        ("morphological", args.morphological_model),
        ("surface", args.surface_model),
    ):
        if path:
            category_models[category] = path
    config = ServiceConfig(
        mixed_model=args.model,
        resources=args.resources,
        category_models=category_models,
        catalog=args.catalog,
        tagger_url=args.tagger_url,
        speller_url=args.speller_url,
        grammar_url=args.grammar_url,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cefrkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file mirroring the flags")
        p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("synth", help="generate the bundled synthetic corpus")
    add_common(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--docs-per-level", type=int, default=150)
    p.add_argument("--test-docs-per-level", type=int, default=30)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="corpus -> feature matrix")
    add_common(p)
    p.add_argument("--manifest", required=True)
    p.add_argument("--doc-root", default=None)
    p.add_argument("--resources", default=None)
    p.add_argument("--catalog", default=None, help="catalog JSON (default: shipped)")
    p.add_argument("--edits", default=None, help="edit annotations JSON")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("audit", help="feature matrix -> relevance report")
    add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--split", default="train")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--bonferroni-denominator", type=int, default=148)
    p.add_argument(
        "--literal-threshold",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="use the rounded 0.0003 decision threshold (default) or the exact ratio",
    )
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("train", help="rank a pipeline grid and save the top models")
    add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--split", default="train")
    p.add_argument("--grid", required=True, help="JSON array of pipeline specs")
    p.add_argument("--relevance", default=None, help="relevance.json enabling relevant_only pools")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("cv", help="cross-validate a single pipeline spec")
    p.add_argument("--config", help="JSON config file mirroring the flags")
    p.add_argument("--matrix", required=True)
    p.add_argument("--split", default="train")
    p.add_argument("--classifier", required=True)
    p.add_argument("--selector", default="univariate", choices=["univariate", "sequential"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--relevance", default=None)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("evaluate", help="model + matrix -> evaluation report")
    add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--split", default="test1")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("importance", help="permutation feature importance")
    add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--split", default="test1")
    p.add_argument("--metric", default="accuracy", choices=["accuracy", "balanced_accuracy"])
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("assess", help="assess one CoNLL-U document")
    p.add_argument("--config", help="JSON config file mirroring the flags")
    p.add_argument("--out", default=None, help="output directory (default: stdout)")
    p.add_argument("--conllu", required=True)
    p.add_argument("--model", required=True, help="mixed model path")
    p.add_argument("--lexical-model", default=None)
    p.add_argument("--morphological-model", default=None)
    p.add_argument("--surface-model", default=None)
    p.add_argument("--resources", required=True)
    p.add_argument("--catalog", default=None)
    p.add_argument("--edits", default=None)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("annotate", help="fetch corrector edits for a corpus")
    add_common(p)
    p.add_argument("--manifest", required=True)
    p.add_argument("--doc-root", default=None)
    p.add_argument("--speller-url", default=None)
    p.add_argument("--grammar-url", default=None)
    p.add_argument("--stub-table", default=None, help="JSON fixture: tool -> sentence -> edits")
    p.add_argument("--timeout", type=float, default=20.0)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("serve", help="run the assessment HTTP service")
    p.add_argument("--config", help="JSON config file mirroring the flags")
    p.add_argument("--model", required=True, help="mixed model path")
    p.add_argument("--lexical-model", default=None)
    p.add_argument("--morphological-model", default=None)
    p.add_argument("--surface-model", default=None)
    p.add_argument("--resources", required=True)
    p.add_argument("--catalog", default=None)
    p.add_argument("--tagger-url", default=None)
    p.add_argument("--speller-url", default=None)
    p.add_argument("--grammar-url", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {
        action.dest: action.default
        for action in parser._subparsers._group_actions[0].choices[args.command]._actions
    }
    try:
        args = _merge_config(args, defaults)
        return args.func(args)
    except DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
