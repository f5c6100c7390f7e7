"""Model serialization: JSON with a catalog hash guarding feature drift."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from cefrkit.ml.pipeline import PipelineSpec, TrainedModel


class ModelIOError(Exception):
    pass


def model_to_json(model: TrainedModel) -> dict:
    return {
        "format": "cefrkit-model-v1",
        "labels": model.labels,
        "feature_ids": model.feature_ids,
        "scaler_mean": model.scaler_mean.tolist(),
        "scaler_scale": model.scaler_scale.tolist(),
        "scaler_constant": model.scaler_constant.astype(bool).tolist(),
        "impute_means": model.impute_means.tolist(),
        "level_means": model.level_means,
        "classifier_name": model.classifier_name,
        "classifier_params": model.classifier_params,
        "catalog_hash": model.catalog_hash,
        "spec": model.spec.to_json(),
    }


def model_from_json(data: dict) -> TrainedModel:
    if data.get("format") != "cefrkit-model-v1":
        raise ModelIOError(f"unsupported model format {data.get('format')!r}")
    return TrainedModel(
        labels=data["labels"],
        feature_ids=data["feature_ids"],
        scaler_mean=np.array(data["scaler_mean"], dtype=float),
        scaler_scale=np.array(data["scaler_scale"], dtype=float),
        scaler_constant=np.array(data["scaler_constant"], dtype=bool),
        impute_means=np.array(data["impute_means"], dtype=float),
        level_means=data["level_means"],
        classifier_name=data["classifier_name"],
        classifier_params=data["classifier_params"],
        catalog_hash=data["catalog_hash"],
        spec=PipelineSpec.from_json(data["spec"]),
    )


def save_model(model: TrainedModel, path: str | Path) -> None:
    payload = json.dumps(model_to_json(model), sort_keys=True, separators=(",", ":"))
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(payload + "\n", encoding="utf-8")
    tmp.replace(path)


def load_model(path: str | Path, expected_catalog_hash: str | None = None) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    model = model_from_json(data)
    if expected_catalog_hash is not None and model.catalog_hash != expected_catalog_hash:
        raise ModelIOError(
            f"model was trained under catalog {model.catalog_hash[:12]}… but the "
            f"active catalog hashes to {expected_catalog_hash[:12]}…; refusing to load"
        )
    return model
