"""Feature matrix: per-document numeric vectors with labels and flags.

Column order is fixed by catalog order. Degenerate entries are stored as
NaN with an explicit flag (serialized as null / "NA"), so consumers can
distinguish "undefined for this text" from a computed value.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from cefrkit.catalog import FeatureCatalog
from cefrkit.corpus import Corpus, Document, LEVELS
from cefrkit.errors import EditAnnotationSet, compute_error_features
from cefrkit.features import (
    compute_diversity,
    compute_morphological,
    compute_sophistication_density,
    compute_surface,
)
from cefrkit.resources import LexicalResources


class MatrixError(Exception):
    pass


class FeatureMatrix:
    def __init__(
        self,
        feature_ids: list[str],
        doc_ids: list[str],
        levels: list[str],
        text_types: list[str],
        splits: list[str],
        values: np.ndarray,
        catalog_hash: str = "",
    ):
        n_docs, n_feats = values.shape
        if not (
            len(doc_ids) == len(levels) == len(text_types) == len(splits) == n_docs
        ):
            raise MatrixError("row metadata length mismatch")
        if len(feature_ids) != n_feats:
            raise MatrixError("feature id count does not match value columns")
        self.feature_ids = list(feature_ids)
        self.doc_ids = list(doc_ids)
        self.levels = list(levels)
        self.text_types = list(text_types)
        self.splits = list(splits)
        self.values = np.asarray(values, dtype=float)
        self.catalog_hash = catalog_hash
        self._col = {fid: i for i, fid in enumerate(self.feature_ids)}

    @property
    def n_docs(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column(self, feature_id: str) -> np.ndarray:
        return self.values[:, self._col[feature_id]]

    def column_index(self, feature_id: str) -> int:
        return self._col[feature_id]

    def degenerate_mask(self) -> np.ndarray:
        return np.isnan(self.values)

    def level_ordinals(self) -> np.ndarray:
        """Levels as ordinals 0..3 in A2..C1 order; -1 for unlabeled rows."""
        order = {lvl: i for i, lvl in enumerate(LEVELS)}
        return np.array([order.get(lvl, -1) for lvl in self.levels], dtype=int)

    def subset_rows(self, mask: np.ndarray) -> "FeatureMatrix":
        idx = np.flatnonzero(mask)
        return FeatureMatrix(
            self.feature_ids,
            [self.doc_ids[i] for i in idx],
            [self.levels[i] for i in idx],
            [self.text_types[i] for i in idx],
            [self.splits[i] for i in idx],
            self.values[idx],
            self.catalog_hash,
        )

    def subset_split(self, split: str) -> "FeatureMatrix":
        return self.subset_rows(np.array([s == split for s in self.splits]))

    def subset_features(self, feature_ids: list[str]) -> "FeatureMatrix":
        missing = [f for f in feature_ids if f not in self._col]
        if missing:
            raise MatrixError(f"unknown feature ids: {missing}")
        cols = [self._col[f] for f in feature_ids]
        return FeatureMatrix(
            feature_ids,
            self.doc_ids,
            self.levels,
            self.text_types,
            self.splits,
            self.values[:, cols],
            self.catalog_hash,
        )

    def to_json(self) -> dict:
        rows = []
        for row in self.values:
            rows.append([None if np.isnan(v) else float(v) for v in row])
        return {
            "feature_ids": self.feature_ids,
            "catalog_hash": self.catalog_hash,
            "doc_ids": self.doc_ids,
            "levels": self.levels,
            "text_types": self.text_types,
            "splits": self.splits,
            "values": rows,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FeatureMatrix":
        rows = data["values"]
        values = np.array(
            [[np.nan if v is None else float(v) for v in row] for row in rows],
            dtype=float,
        ).reshape(len(rows), len(data["feature_ids"]))
        return cls(
            data["feature_ids"],
            data["doc_ids"],
            data["levels"],
            data["text_types"],
            data["splits"],
            values,
            data.get("catalog_hash", ""),
        )

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "FeatureMatrix":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_tsv(self) -> str:
        header = ["doc_id", "level", "text_type", "split"] + self.feature_ids
        lines = ["\t".join(header)]
        for i in range(self.n_docs):
            cells = [self.doc_ids[i], self.levels[i], self.text_types[i], self.splits[i]]
            cells += [
                "NA" if np.isnan(v) else format(v, ".10g") for v in self.values[i]
            ]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def extract_document_features(
    doc: Document,
    catalog: FeatureCatalog,
    res: LexicalResources | None = None,
    edits: list | None = None,
) -> dict[str, float | None]:
    """Feature values for one document, restricted to the catalog's ids."""
    categories = {f.category for f in catalog}
    computed: dict[str, float | None] = {}
    if "lexical" in categories:
        if res is None:
            raise MatrixError("lexical features requested but no resources supplied")
        computed.update(compute_diversity(doc))
        computed.update(compute_sophistication_density(doc, res))
    if "morphological" in categories:
        computed.update(compute_morphological(doc))
    if "surface" in categories:
        computed.update(compute_surface(doc))
    if "error" in categories:
        computed.update(compute_error_features(doc, edits or []))

    missing = [f.id for f in catalog if f.id not in computed]
    if missing:
        raise MatrixError(f"catalog ids not produced by any extractor: {missing}")
    return {f.id: computed[f.id] for f in catalog}


def extract_features(
    corpus: Corpus,
    catalog: FeatureCatalog,
    res: LexicalResources | None = None,
    edits: EditAnnotationSet | None = None,
) -> FeatureMatrix:
    """One feature vector per document, column order fixed by the catalog."""
    categories = {f.category for f in catalog}
    if "error" in categories and edits is None:
        affected = ", ".join(d.doc_id for d in corpus)
        raise MatrixError(
            f"error features requested but no edit annotations supplied; affected "
            f"documents: {affected}"
        )

    doc_ids, levels, text_types, splits, rows = [], [], [], [], []
    for doc in corpus:
        doc_edits = edits.edits_for(doc.doc_id) if edits is not None else None
        values = extract_document_features(doc, catalog, res, doc_edits)
        rows.append(
            [np.nan if values[fid] is None else values[fid] for fid in catalog.ids]
        )
        doc_ids.append(doc.doc_id)
        levels.append(doc.meta.level if doc.meta else "")
        text_types.append(doc.meta.text_type if doc.meta else "")
        splits.append(doc.meta.split if doc.meta else "unlabeled")

    return FeatureMatrix(
        catalog.ids,
        doc_ids,
        levels,
        text_types,
        splits,
        np.array(rows, dtype=float).reshape(len(rows), len(catalog.ids)),
        catalog.version_hash(),
    )
