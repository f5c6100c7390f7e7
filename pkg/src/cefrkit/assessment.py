"""Single-document assessment: overall level, sub-ratings, feature feedback.

The mixed model decides the overall level; category models (lexical,
morphological, surface) provide sub-ratings. The feature report positions
the document's value against the per-level training means stored in the
models, so a client needs no statistics of its own. Error features are
computed live only when a corrector supplies edits; otherwise they are
treated as degenerate and imputed with training means (with a warning).
"""

from __future__ import annotations

import math

import numpy as np

from cefrkit.catalog import FeatureCatalog
from cefrkit.corpus import Document
from cefrkit.errors import Edit
from cefrkit.matrix import extract_document_features
from cefrkit.ml.pipeline import TrainedModel
from cefrkit.resources import LexicalResources

SHORT_TEXT_WORDS = 30

SUB_RATING_CATEGORIES = ("lexical", "morphological", "surface")


class AssessmentError(Exception):
    pass


def compute_feature_values(
    doc: Document,
    catalog: FeatureCatalog,
    res: LexicalResources,
    edits: list[Edit] | None,
) -> tuple[dict[str, float | None], list[str]]:
    """All catalog feature values for one document plus warnings.

    ``edits=None`` means no corrector output is available: error features
    become degenerate rather than silently zero.
    """
    warnings: list[str] = []
    error_ids = [f.id for f in catalog.by_category("error")]
    if edits is None and error_ids:
        non_error = catalog.subset([f.id for f in catalog if f.category != "error"])
        values = extract_document_features(doc, non_error, res)
        values.update({fid: None for fid in error_ids})
        warnings.append(
            "error features imputed with training means (no corrector output)"
        )
    else:
        values = extract_document_features(doc, catalog, res, edits or [])
    return values, warnings


def _predict_level(model: TrainedModel, values: dict[str, float | None]) -> str:
    row = np.array(
        [[math.nan if values.get(fid) is None else values[fid] for fid in model.feature_ids]]
    )
    return model.labels[int(model.predict_rows(row)[0])]


def assess_document(
    doc: Document,
    catalog: FeatureCatalog,
    res: LexicalResources,
    mixed_model: TrainedModel,
    category_models: dict[str, TrainedModel] | None = None,
    edits: list[Edit] | None = None,
    model_ids: dict[str, str] | None = None,
) -> dict:
    """Build the assessment payload for one document."""
    category_models = category_models or {}
    values, warnings = compute_feature_values(doc, catalog, res, edits)

    word_count = len(doc.words())
    if word_count < SHORT_TEXT_WORDS:
        warnings.append(
            f"text has only {word_count} words; scores on very short texts are unstable"
        )

    overall = _predict_level(mixed_model, values)
    sub_levels = {
        category: _predict_level(model, values)
        for category, model in sorted(category_models.items())
    }

    reported: dict[str, dict] = {}
    models_for_report = [mixed_model] + [category_models[c] for c in sorted(category_models)]
    degenerate_used: list[str] = []
    for model in models_for_report:
        for fid in model.feature_ids:
            if fid in reported:
                continue
            value = values.get(fid)
            if value is None:
                degenerate_used.append(fid)
            reported[fid] = {
                "value": value,
                "degenerate": value is None,
                "training_level_means": model.level_means.get(fid, {}),
            }
    if degenerate_used:
        warnings.append(
            "degenerate features imputed with training means: "
            + ", ".join(sorted(set(degenerate_used)))
        )

    return {
        "overall_level": overall,
        "sub_levels": sub_levels,
        "word_count": word_count,
        "feature_report": reported,
        "model_ids": model_ids or {},
        "warnings": warnings,
    }
