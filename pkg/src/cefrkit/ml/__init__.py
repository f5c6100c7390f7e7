"""Classifier pipelines: standardize, select, train, evaluate, explain."""

from cefrkit.ml.pipeline import (
    EvalReport,
    ImportanceReport,
    PipelineSpec,
    TrainedModel,
    cross_validate,
    evaluate,
    permutation_importance,
    rank_pipelines,
    train,
)
from cefrkit.ml.persist import load_model, save_model

__all__ = [
    "EvalReport",
    "ImportanceReport",
    "PipelineSpec",
    "TrainedModel",
    "cross_validate",
    "evaluate",
    "permutation_importance",
    "rank_pipelines",
    "train",
    "save_model",
    "load_model",
]
