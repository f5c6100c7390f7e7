"""Document model and CoNLL-U / manifest ingestion.

A corpus is a set of learner texts, each tokenized, lemmatized and
morphologically annotated in CoNLL-U, plus a JSON manifest that attaches
the proficiency level, text type and train/test split to every document.
Multiword-token range lines and empty nodes are dropped on parse, so all
counting downstream operates on syntactic words.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})
# Tags excluded from word counts (see design note in features.surface).
NON_WORD_TAGS = frozenset({"PUNCT", "SYM"})

LEVELS = ("A2", "B1", "B2", "C1")
TEXT_TYPES = ("personal_letter", "narrative", "semi_formal_letter", "argumentative")
SPLITS = ("train", "test1", "test2", "unlabeled")


class CorpusError(Exception):
    """Raised for malformed CoNLL-U input or inconsistent manifests."""


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    upos: str
    feats: dict[str, str] = field(default_factory=dict)
    misc: str = ""

    @property
    def is_word(self) -> bool:
        return self.upos not in NON_WORD_TAGS


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise CorpusError("sentence with no tokens")

    def words(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]

    def text(self) -> str:
        return " ".join(t.form for t in self.tokens)


@dataclass(frozen=True)
class DocMeta:
    level: str
    text_type: str
    split: str = "unlabeled"

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise CorpusError(f"unknown level {self.level!r}; expected one of {LEVELS}")
        if self.text_type not in TEXT_TYPES:
            raise CorpusError(
                f"unknown text_type {self.text_type!r}; expected one of {TEXT_TYPES}"
            )
        if self.split not in SPLITS:
            raise CorpusError(f"unknown split {self.split!r}; expected one of {SPLITS}")


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[Sentence, ...]
    meta: DocMeta | None = None

    def __post_init__(self) -> None:
        if not self.sentences:
            raise CorpusError(f"document {self.doc_id!r} has no sentences")

    def tokens(self) -> Iterator[Token]:
        for sent in self.sentences:
            yield from sent.tokens

    def words(self) -> list[Token]:
        return [t for t in self.tokens() if t.is_word]


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    manifest_path: str = ""

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def split(self, name: str) -> list[Document]:
        return [d for d in self.documents if d.meta is not None and d.meta.split == name]


def _parse_feats(raw: str, lineno: int) -> dict[str, str]:
    if raw == "_" or raw == "":
        return {}
    feats: dict[str, str] = {}
    for pair in raw.split("|"):
        key, sep, value = pair.partition("=")
        if not sep or not key or not value:
            raise CorpusError(f"line {lineno}: malformed FEATS entry {pair!r}")
        feats[key] = value
    return feats


def parse_conllu(source: str | IO[str]) -> list[Sentence]:
    """Parse CoNLL-U text into sentences of syntactic-word tokens.

    Comment lines, multiword-token ranges (``3-4``) and empty nodes
    (``3.1``) are skipped. ``_`` fields are treated as absent. Raises
    CorpusError with a line number for structural problems.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()

    sentences: list[Sentence] = []
    current: list[Token] = []
    expected_index = 1

    def flush() -> None:
        nonlocal current, expected_index
        if current:
            sentences.append(Sentence(tokens=tuple(current)))
            current = []
        expected_index = 1

    for lineno, line in enumerate(lines, start=1):
        if line.strip() == "":
            flush()
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusError(
                f"line {lineno}: expected 10 tab-separated columns, got {len(cols)}"
            )
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            # multiword range or empty node: member words carry the annotation
            continue
        try:
            index = int(tok_id)
        except ValueError:
            raise CorpusError(f"line {lineno}: invalid token id {tok_id!r}") from None
        if index != expected_index:
            raise CorpusError(
                f"line {lineno}: token id {index} out of order (expected {expected_index})"
            )
        expected_index += 1
        upos = cols[3] if cols[3] != "_" else "X"
        if upos not in UPOS_TAGS:
            raise CorpusError(f"line {lineno}: unknown UPOS tag {cols[3]!r}")
        current.append(
            Token(
                index=index,
                form=cols[1] if cols[1] != "_" else "",
                lemma=cols[2] if cols[2] != "_" else "",
                upos=upos,
                feats=_parse_feats(cols[5], lineno),
                misc=cols[9] if cols[9] != "_" else "",
            )
        )
    flush()
    return sentences


def serialize_conllu(sentences: Iterable[Sentence]) -> str:
    """Render sentences back to CoNLL-U (unannotated columns as ``_``)."""
    blocks = []
    for sent in sentences:
        lines = []
        for tok in sent.tokens:
            feats = (
                "|".join(f"{k}={v}" for k, v in tok.feats.items()) if tok.feats else "_"
            )
            lines.append(
                "\t".join([
                    str(tok.index),
                    tok.form or "_",
                    tok.lemma or "_",
                    tok.upos,
                    "_",
                    feats,
                    "_",
                    "_",
                    "_",
                    tok.misc or "_",
                ])
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def load_document(path: Path, doc_id: str, meta: DocMeta | None = None) -> Document:
    with open(path, encoding="utf-8") as fh:
        sentences = parse_conllu(fh)
    if not sentences:
        raise CorpusError(f"document {doc_id!r}: file {path} contains no sentences")
    return Document(doc_id=doc_id, sentences=tuple(sentences), meta=meta)


def load_corpus(manifest_path: str | Path, doc_root: str | Path | None = None) -> Corpus:
    """Load the documents listed in a JSON manifest.

    The manifest is an array of ``{doc_id, file, level, text_type, split}``
    rows; ``file`` paths are resolved relative to ``doc_root`` (defaults to
    the manifest's directory). Documents are returned sorted by doc_id so
    the corpus is independent of filesystem enumeration order.
    """
    manifest_path = Path(manifest_path)
    root = Path(doc_root) if doc_root is not None else manifest_path.parent
    with open(manifest_path, encoding="utf-8") as fh:
        rows = json.load(fh)
    if not isinstance(rows, list):
        raise CorpusError("manifest must be a JSON array")

    seen: set[str] = set()
    documents: list[Document] = []
    for row in rows:
        try:
            doc_id = row["doc_id"]
            rel = row["file"]
        except (TypeError, KeyError) as exc:
            raise CorpusError(f"manifest row missing field: {exc}") from None
        if doc_id in seen:
            raise CorpusError(f"duplicate doc_id {doc_id!r} in manifest")
        seen.add(doc_id)
        meta = DocMeta(
            level=row.get("level", ""),
            text_type=row.get("text_type", ""),
            split=row.get("split", "unlabeled"),
        )
        path = root / rel
        if not path.is_file():
            raise CorpusError(f"document {doc_id!r}: file not found: {path}")
        documents.append(load_document(path, doc_id, meta))

    documents.sort(key=lambda d: d.doc_id)
    return Corpus(documents=tuple(documents), manifest_path=str(manifest_path))
