"""Training, selection, cross-validation, ranking, evaluation, importance.

A pipeline is: impute degenerate values with training means, standardize
with training statistics, select features, fit one of seven classifier
families. Everything downstream of the training matrix and the seed is
deterministic, so identical runs produce identical models and reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cefrkit.corpus import LEVELS
from cefrkit.matrix import FeatureMatrix
from cefrkit.ml.discriminant import LinearDiscriminant, QuadraticDiscriminant
from cefrkit.ml.folds import stratified_folds
from cefrkit.ml.forest import RandomForest
from cefrkit.ml.linear import LogisticRegression, LogisticRegressionCV
from cefrkit.ml.neural import MLP
from cefrkit.ml.scaler import Scaler
from cefrkit.ml.selection import SelectionError, select_sequential, select_univariate
from cefrkit.ml.svm import SVM

CLASSIFIERS = {
    "lr": LogisticRegression,
    "lr_cv": LogisticRegressionCV,
    "svm": SVM,
    "rf": RandomForest,
    "mlp": MLP,
    "lda": LinearDiscriminant,
    "qda": QuadraticDiscriminant,
}

SELECTORS = ("univariate", "sequential")


class PipelineError(Exception):
    pass


@dataclass(frozen=True)
class PipelineSpec:
    classifier: str
    selector: str
    k: int | None = None          # univariate feature count
    feature_pool: str = "all"     # "all" or "relevant_only"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.classifier not in CLASSIFIERS:
            raise PipelineError(f"unknown classifier {self.classifier!r}")
        if self.selector not in SELECTORS:
            raise PipelineError(f"unknown selector {self.selector!r}")
        if self.selector == "univariate" and (self.k is None or self.k < 1):
            raise PipelineError("univariate selection needs k >= 1")
        if self.feature_pool not in ("all", "relevant_only"):
            raise PipelineError(f"unknown feature pool {self.feature_pool!r}")
        if self.seed is None:
            raise PipelineError("seed is mandatory")

    def label(self) -> str:
        pool = "rel" if self.feature_pool == "relevant_only" else "all"
        if self.selector == "univariate":
            return f"{pool}-{self.classifier}-kbest-{self.k}"
        return f"{pool}-{self.classifier}-sfs"

    def to_json(self) -> dict:
        return {
            "classifier": self.classifier,
            "selector": self.selector,
            "k": self.k,
            "feature_pool": self.feature_pool,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PipelineSpec":
        return cls(
            classifier=data["classifier"],
            selector=data["selector"],
            k=data.get("k"),
            feature_pool=data.get("feature_pool", "all"),
            seed=data["seed"],
        )


@dataclass
class TrainedModel:
    labels: list[str]
    feature_ids: list[str]
    scaler_mean: np.ndarray
    scaler_scale: np.ndarray
    scaler_constant: np.ndarray
    impute_means: np.ndarray
    level_means: dict[str, dict[str, float]]   # feature -> level -> mean
    classifier_name: str
    classifier_params: dict
    catalog_hash: str
    spec: PipelineSpec

    _classifier: object | None = field(default=None, repr=False)

    def classifier(self):
        if self._classifier is None:
            self._classifier = CLASSIFIERS[self.classifier_name].from_params(
                self.classifier_params
            )
        return self._classifier

    def transform(self, raw: np.ndarray) -> np.ndarray:
        """Impute degenerate entries with training means, then standardize."""
        raw = np.array(raw, dtype=float, copy=True)
        nan_mask = np.isnan(raw)
        if nan_mask.any():
            raw[nan_mask] = np.broadcast_to(self.impute_means, raw.shape)[nan_mask]
        out = (raw - self.scaler_mean) / self.scaler_scale
        if self.scaler_constant.any():
            out[:, self.scaler_constant] = raw[:, self.scaler_constant]
        return out

    def predict_rows(self, raw: np.ndarray) -> np.ndarray:
        return self.classifier().predict(self.transform(raw))

    def predict_matrix(self, matrix: FeatureMatrix) -> np.ndarray:
        sub = matrix.subset_features(self.feature_ids)
        return self.predict_rows(sub.values)

    def predict_levels(self, matrix: FeatureMatrix) -> list[str]:
        return [self.labels[i] for i in self.predict_matrix(matrix)]


def _pool_feature_ids(matrix: FeatureMatrix, spec: PipelineSpec, relevant_ids) -> list[str]:
    if spec.feature_pool == "relevant_only":
        if not relevant_ids:
            raise PipelineError("feature_pool=relevant_only requires relevant feature ids")
        pool = [f for f in matrix.feature_ids if f in set(relevant_ids)]
    else:
        pool = list(matrix.feature_ids)
    if not pool:
        raise PipelineError("empty feature pool")
    return pool


def _ordinals(matrix: FeatureMatrix) -> np.ndarray:
    y = matrix.level_ordinals()
    if (y < 0).any():
        raise PipelineError("matrix has unlabeled rows")
    return y


def _impute_columns(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    means = np.nanmean(values, axis=0) if values.size else np.array([])
    if np.isnan(means).any():
        bad = np.flatnonzero(np.isnan(means))
        raise PipelineError(f"features with no usable training values at columns {bad.tolist()}")
    out = np.array(values, copy=True)
    nan_mask = np.isnan(out)
    out[nan_mask] = np.broadcast_to(means, out.shape)[nan_mask]
    return out, means


def train(matrix: FeatureMatrix, spec: PipelineSpec, relevant_ids: list[str] | None = None) -> TrainedModel:
    y = _ordinals(matrix)
    if not np.isfinite(matrix.values[~np.isnan(matrix.values)]).all():
        raise PipelineError("non-finite feature values in training matrix")
    pool = _pool_feature_ids(matrix, spec, relevant_ids)
    raw = matrix.subset_features(pool).values
    imputed, impute_means = _impute_columns(raw)
    scaler = Scaler.fit(imputed)
    standardized = scaler.apply(imputed)

    if spec.selector == "univariate":
        if spec.k > len(pool):
            raise SelectionError(f"k={spec.k} exceeds pool size {len(pool)}")
        columns = select_univariate(standardized, y, spec.k)
    else:
        factory = CLASSIFIERS[spec.classifier]
        columns = select_sequential(
            standardized, y, len(LEVELS), factory, seed=spec.seed
        )
        if not columns:
            raise PipelineError("sequential selection returned no features")

    selected_ids = [pool[i] for i in columns]
    classifier = CLASSIFIERS[spec.classifier]()
    classifier.fit(standardized[:, columns], y, len(LEVELS), seed=spec.seed)

    level_arr = np.array(matrix.levels)
    level_means: dict[str, dict[str, float]] = {}
    for fid, col_idx in zip(selected_ids, columns):
        col = raw[:, col_idx]
        level_means[fid] = {}
        for level in LEVELS:
            values = col[(level_arr == level) & ~np.isnan(col)]
            level_means[fid][level] = float(values.mean()) if len(values) else float("nan")

    sub_scaler = scaler.subset(columns)
    return TrainedModel(
        labels=list(LEVELS),
        feature_ids=selected_ids,
        scaler_mean=sub_scaler.mean,
        scaler_scale=sub_scaler.scale,
        scaler_constant=sub_scaler.constant,
        impute_means=impute_means[columns],
        level_means=level_means,
        classifier_name=spec.classifier,
        classifier_params=classifier.get_params(),
        catalog_hash=matrix.catalog_hash,
        spec=spec,
    )


def _per_class_metrics(confusion: np.ndarray) -> dict:
    k = confusion.shape[0]
    precision, recall, f1 = [], [], []
    for c in range(k):
        tp = confusion[c, c]
        predicted = confusion[:, c].sum()
        actual = confusion[c, :].sum()
        p = tp / predicted if predicted else 0.0
        r = tp / actual if actual else 0.0
        f = 2 * p * r / (p + r) if (p + r) else 0.0
        precision.append(float(p))
        recall.append(float(r))
        f1.append(float(f))
    return {"precision": precision, "recall": recall, "f1": f1}


def _sd(values) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


@dataclass
class EvalReport:
    accuracy: float
    balanced_accuracy: float
    precision: list[float]
    recall: list[float]
    f1: list[float]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    precision_sd: float
    recall_sd: float
    f1_sd: float
    confusion: list[list[int]]
    per_text_type_recall: dict[str, float]
    within_one_level_accuracy: float
    n_rows: int

    def to_json(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "balanced_accuracy": self.balanced_accuracy,
            "per_class": {
                "labels": list(LEVELS),
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
            },
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
                "precision_sd": self.precision_sd,
                "recall_sd": self.recall_sd,
                "f1_sd": self.f1_sd,
            },
            "confusion": self.confusion,
            "per_text_type_recall": self.per_text_type_recall,
            "within_one_level_accuracy": self.within_one_level_accuracy,
            "n_rows": self.n_rows,
        }


def evaluate(model: TrainedModel, matrix: FeatureMatrix, split: str | None = None) -> EvalReport:
    if split is not None:
        matrix = matrix.subset_split(split)
    if matrix.n_docs == 0:
        raise PipelineError("no rows to evaluate")
    y_true = _ordinals(matrix)
    y_pred = model.predict_matrix(matrix)
    k = len(LEVELS)
    confusion = np.zeros((k, k), dtype=int)
    for t, p in zip(y_true, y_pred):
        confusion[t, p] += 1
    metrics = _per_class_metrics(confusion)
    accuracy = float(np.trace(confusion) / confusion.sum())
    within_one = float(np.mean(np.abs(y_true - y_pred) <= 1))

    per_type: dict[str, float] = {}
    for level in LEVELS:
        for text_type in sorted(set(matrix.text_types)):
            rows = [
                i
                for i in range(matrix.n_docs)
                if matrix.levels[i] == level and matrix.text_types[i] == text_type
            ]
            if rows:
                correct = sum(1 for i in rows if y_pred[i] == y_true[i])
                per_type[f"{level}/{text_type}"] = correct / len(rows)

    return EvalReport(
        accuracy=accuracy,
        balanced_accuracy=float(np.mean(metrics["recall"])),
        precision=metrics["precision"],
        recall=metrics["recall"],
        f1=metrics["f1"],
        macro_precision=float(np.mean(metrics["precision"])),
        macro_recall=float(np.mean(metrics["recall"])),
        macro_f1=float(np.mean(metrics["f1"])),
        precision_sd=_sd(metrics["precision"]),
        recall_sd=_sd(metrics["recall"]),
        f1_sd=_sd(metrics["f1"]),
        confusion=confusion.tolist(),
        per_text_type_recall=per_type,
        within_one_level_accuracy=within_one,
        n_rows=matrix.n_docs,
    )


@dataclass
class CVReport:
    folds: list[dict]
    mean_accuracy: float
    sd_accuracy: float
    mean_macro_precision: float
    mean_macro_recall: float
    mean_macro_f1: float

    def to_json(self) -> dict:
        return {
            "folds": self.folds,
            "mean_accuracy": self.mean_accuracy,
            "sd_accuracy": self.sd_accuracy,
            "mean_macro_precision": self.mean_macro_precision,
            "mean_macro_recall": self.mean_macro_recall,
            "mean_macro_f1": self.mean_macro_f1,
        }


def cross_validate(
    matrix: FeatureMatrix,
    spec: PipelineSpec,
    folds: int = 10,
    relevant_ids: list[str] | None = None,
) -> CVReport:
    y = _ordinals(matrix)
    fold_rows = stratified_folds(y, folds, spec.seed)
    all_rows = np.arange(matrix.n_docs)
    fold_reports = []
    for fold in fold_rows:
        train_mask = np.isin(all_rows, np.setdiff1d(all_rows, fold))
        model = train(matrix.subset_rows(train_mask), spec, relevant_ids)
        holdout = matrix.subset_rows(np.isin(all_rows, fold))
        report = evaluate(model, holdout)
        fold_reports.append(
            {
                "accuracy": report.accuracy,
                "macro_precision": report.macro_precision,
                "macro_recall": report.macro_recall,
                "macro_f1": report.macro_f1,
            }
        )
    accuracies = [f["accuracy"] for f in fold_reports]
    return CVReport(
        folds=fold_reports,
        mean_accuracy=float(np.mean(accuracies)),
        sd_accuracy=_sd(accuracies),
        mean_macro_precision=float(np.mean([f["macro_precision"] for f in fold_reports])),
        mean_macro_recall=float(np.mean([f["macro_recall"] for f in fold_reports])),
        mean_macro_f1=float(np.mean([f["macro_f1"] for f in fold_reports])),
    )


@dataclass
class RankedPipeline:
    spec: PipelineSpec
    cv: CVReport
    n_features: int

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "label": self.spec.label(),
            "cv": self.cv.to_json(),
            "n_features": self.n_features,
        }


def rank_pipelines(
    matrix: FeatureMatrix,
    grid: list[PipelineSpec],
    folds: int = 10,
    relevant_ids: list[str] | None = None,
    top: int = 5,
) -> list[RankedPipeline]:
    """Rank grid entries by mean CV accuracy.

    Among equal-accuracy entries of one selector+classifier+pool family,
    only the smallest feature count is kept. The final order is canonical
    (accuracy desc, feature count asc, then classifier/selector names), so
    it does not depend on grid enumeration order.
    """
    if not grid:
        raise PipelineError("empty pipeline grid")
    entries: list[RankedPipeline] = []
    for spec in grid:
        cv = cross_validate(matrix, spec, folds=folds, relevant_ids=relevant_ids)
        if spec.selector == "univariate":
            n_features = spec.k
        else:
            n_features = len(train(matrix, spec, relevant_ids).feature_ids)
        entries.append(RankedPipeline(spec=spec, cv=cv, n_features=n_features))

    by_family: dict[tuple, list[RankedPipeline]] = {}
    for entry in entries:
        key = (entry.spec.feature_pool, entry.spec.selector, entry.spec.classifier)
        by_family.setdefault(key, []).append(entry)
    kept: list[RankedPipeline] = []
    for family in by_family.values():
        best_for_accuracy: dict[float, RankedPipeline] = {}
        for entry in family:
            acc = round(entry.cv.mean_accuracy, 12)
            current = best_for_accuracy.get(acc)
            if current is None or entry.n_features < current.n_features:
                best_for_accuracy[acc] = entry
        kept.extend(best_for_accuracy.values())

    kept.sort(
        key=lambda e: (
            -e.cv.mean_accuracy,
            e.n_features,
            e.spec.classifier,
            e.spec.selector,
            e.spec.k or 0,
        )
    )
    return kept[:top]


@dataclass
class ImportanceReport:
    metric: str
    base_score: float
    repeats: int
    features: dict[str, dict[str, float]]   # feature -> {mean_drop, sd_drop}

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "base_score": self.base_score,
            "repeats": self.repeats,
            "features": self.features,
        }


def _metric_score(metric: str, y_true: np.ndarray, y_pred: np.ndarray) -> float:
    k = len(LEVELS)
    if metric == "accuracy":
        return float(np.mean(y_true == y_pred))
    if metric == "balanced_accuracy":
        recalls = []
        for c in range(k):
            actual = y_true == c
            recalls.append(float(np.mean(y_pred[actual] == c)) if actual.any() else 0.0)
        return float(np.mean(recalls))
    raise PipelineError(f"unknown metric {metric!r}")


def permutation_importance(
    model: TrainedModel,
    matrix: FeatureMatrix,
    metric: str = "accuracy",
    repeats: int = 10,
    seed: int = 0,
) -> ImportanceReport:
    """Mean metric drop over seeded shuffles of one feature column at a time."""
    sub = matrix.subset_features(model.feature_ids)
    y_true = _ordinals(sub)
    base_raw = sub.values
    base_score = _metric_score(metric, y_true, model.predict_rows(base_raw))

    master = np.random.default_rng(seed)
    shuffle_seeds = master.integers(0, 2**63 - 1, size=(len(model.feature_ids), repeats))
    features: dict[str, dict[str, float]] = {}
    for col, fid in enumerate(model.feature_ids):
        drops = []
        for r in range(repeats):
            rng = np.random.default_rng(int(shuffle_seeds[col, r]))
            permuted = np.array(base_raw, copy=True)
            permuted[:, col] = permuted[rng.permutation(len(y_true)), col]
            score = _metric_score(metric, y_true, model.predict_rows(permuted))
            drops.append(base_score - score)
        features[fid] = {"mean_drop": float(np.mean(drops)), "sd_drop": _sd(drops)}
    return ImportanceReport(
        metric=metric, base_score=base_score, repeats=repeats, features=features
    )
