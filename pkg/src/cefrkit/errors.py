"""Correction-edit annotations and the nine error-frequency features.

Edits are token spans proposed by an external speller or grammar
corrector; correction types are not modeled, only which tool produced the
edit. Speller edits are single-token substitutions; grammar edits may
span several tokens (a three-word reorder is one edit covering three
tokens). Edits are stored per document as JSON so a corpus is annotated
once and reused offline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from cefrkit.corpus import Document

TOOLS = ("speller", "grammar")


class EditValidationError(Exception):
    """Edit data inconsistent with the document it annotates."""


class CorrectorTransportError(Exception):
    """Retriable transport/timeout failure talking to a corrector."""


@dataclass(frozen=True)
class Edit:
    tool: str
    sentence_index: int
    start: int
    end: int
    replacement: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.tool not in TOOLS:
            raise EditValidationError(f"unknown tool {self.tool!r}")
        if not (0 <= self.start < self.end):
            raise EditValidationError(
                f"bad span [{self.start},{self.end}) (need 0 <= start < end)"
            )


def validate_edits(doc: Document, edits: list[Edit]) -> None:
    """Check spans against the document; same-tool spans must not overlap."""
    n_sents = len(doc.sentences)
    by_key: dict[tuple[str, int], list[Edit]] = {}
    for edit in edits:
        if not (0 <= edit.sentence_index < n_sents):
            raise EditValidationError(
                f"doc {doc.doc_id!r}: sentence index {edit.sentence_index} out of range"
            )
        sent_len = len(doc.sentences[edit.sentence_index].tokens)
        if edit.end > sent_len:
            raise EditValidationError(
                f"doc {doc.doc_id!r} sentence {edit.sentence_index}: span "
                f"[{edit.start},{edit.end}) exceeds {sent_len} tokens"
            )
        if edit.tool == "speller" and edit.end - edit.start != 1:
            raise EditValidationError(
                f"doc {doc.doc_id!r} sentence {edit.sentence_index}: speller edits "
                "must cover exactly one token"
            )
        by_key.setdefault((edit.tool, edit.sentence_index), []).append(edit)
    for (tool, sent_idx), group in by_key.items():
        group = sorted(group, key=lambda e: e.start)
        for prev, cur in zip(group, group[1:]):
            if cur.start < prev.end:
                raise EditValidationError(
                    f"doc {doc.doc_id!r} sentence {sent_idx}: overlapping {tool} spans "
                    f"[{prev.start},{prev.end}) and [{cur.start},{cur.end})"
                )


def compute_error_features(doc: Document, edits: list[Edit]) -> dict[str, float | None]:
    """The nine error features; denominators use word tokens (not punctuation)."""
    validate_edits(doc, edits)
    sentences = doc.sentences
    n_sents = len(sentences)
    word_count = sum(len(s.words()) for s in sentences)
    if word_count == 0:
        from cefrkit.features.lexical import FeatureError

        raise FeatureError(f"document {doc.doc_id!r} has no word tokens")

    per_tool = {tool: [e for e in edits if e.tool == tool] for tool in TOOLS}
    # word tokens covered by spans, per tool and per sentence
    covered: dict[str, list[int]] = {}
    sent_words = [
        [i for i, t in enumerate(s.tokens) if t.is_word] for s in sentences
    ]
    for tool in TOOLS:
        counts = []
        for sent_idx, word_positions in enumerate(sent_words):
            spans = [
                (e.start, e.end)
                for e in per_tool[tool]
                if e.sentence_index == sent_idx
            ]
            counts.append(
                sum(1 for p in word_positions if any(a <= p < b for a, b in spans))
            )
        covered[tool] = counts

    def sentences_with(tool: str) -> int:
        hit = {e.sentence_index for e in per_tool[tool]}
        return len(hit)

    def mean_sentence_pct(tool: str) -> float:
        pcts = []
        for sent_idx, word_positions in enumerate(sent_words):
            n_words = len(word_positions)
            pcts.append(100.0 * covered[tool][sent_idx] / n_words if n_words else 0.0)
        return sum(pcts) / n_sents

    n_spell = len(per_tool["speller"])
    n_gram = len(per_tool["grammar"])
    return {
        "spell_words_pct": 100.0 * sum(covered["speller"]) / word_count,
        "spell_sentences_pct": 100.0 * sentences_with("speller") / n_sents,
        "spell_edits_per_sentence": n_spell / n_sents,
        "spell_words_pct_sentence_avg": mean_sentence_pct("speller"),
        "gram_edits_per_word": n_gram / word_count,
        "gram_edits_per_sentence": n_gram / n_sents,
        "gram_sentences_pct": 100.0 * sentences_with("grammar") / n_sents,
        "gram_span_words_pct": 100.0 * sum(covered["grammar"]) / word_count,
        "gram_span_words_pct_sentence_avg": mean_sentence_pct("grammar"),
    }


class EditAnnotationSet:
    """Per-document edit lists, serializable as a JSON map."""

    def __init__(self, edits_by_doc: dict[str, list[Edit]] | None = None):
        self._edits = dict(edits_by_doc or {})

    def edits_for(self, doc_id: str) -> list[Edit]:
        return list(self._edits.get(doc_id, []))

    def set_edits(self, doc_id: str, edits: list[Edit]) -> None:
        self._edits[doc_id] = list(edits)

    def doc_ids(self) -> list[str]:
        return sorted(self._edits)

    def to_json(self) -> dict:
        return {
            doc_id: [
                {
                    "tool": e.tool,
                    "sentence_index": e.sentence_index,
                    "start": e.start,
                    "end": e.end,
                    "replacement": list(e.replacement),
                }
                for e in edits
            ]
            for doc_id, edits in sorted(self._edits.items())
        }

    @classmethod
    def from_json(cls, data: dict) -> "EditAnnotationSet":
        edits_by_doc = {}
        for doc_id, rows in data.items():
            edits_by_doc[doc_id] = [
                Edit(
                    tool=row["tool"],
                    sentence_index=row["sentence_index"],
                    start=row["start"],
                    end=row["end"],
                    replacement=tuple(row.get("replacement", [])),
                )
                for row in rows
            ]
        return cls(edits_by_doc)

    def save(self, path: str | Path) -> None:
        tmp = Path(str(path) + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, ensure_ascii=False, indent=1)
            fh.write("\n")
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path) -> "EditAnnotationSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


@dataclass
class CorrectorClient:
    """HTTP client for a correction service.

    Contract: POST ``{"sentence": text}`` to the endpoint, response JSON
    ``{"edits": [{"start", "end", "replacement"}]}`` with token spans over
    the whitespace-joined sentence.
    """

    endpoint: str
    tool: str
    timeout: float = 10.0

    def correct(self, sentence_text: str) -> list[dict]:
        try:
            response = httpx.post(
                self.endpoint, json={"sentence": sentence_text}, timeout=self.timeout
            )
            response.raise_for_status()
            payload = response.json()
        except httpx.HTTPError as exc:
            raise CorrectorTransportError(
                f"{self.tool} corrector at {self.endpoint}: {exc}"
            ) from exc
        return payload.get("edits", [])


@dataclass
class StubCorrectorClient:
    """Offline stand-in: maps sentence text to fixed edit rows."""

    tool: str
    table: dict[str, list[dict]] = field(default_factory=dict)
    endpoint: str = "stub://corrector"

    def correct(self, sentence_text: str) -> list[dict]:
        return [dict(row) for row in self.table.get(sentence_text, [])]


def fetch_edits(doc: Document, client) -> list[Edit]:
    """Collect edits for a document, one corrector request per sentence.

    Responses that fail span validation raise EditValidationError rather
    than being dropped.
    """
    edits: list[Edit] = []
    for sent_idx, sentence in enumerate(doc.sentences):
        for row in client.correct(sentence.text()):
            try:
                edit = Edit(
                    tool=client.tool,
                    sentence_index=sent_idx,
                    start=int(row["start"]),
                    end=int(row["end"]),
                    replacement=tuple(row.get("replacement", [])),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise EditValidationError(
                    f"doc {doc.doc_id!r} sentence {sent_idx}: malformed corrector "
                    f"response row {row!r}"
                ) from exc
            edits.append(edit)
    validate_edits(doc, edits)
    return edits
