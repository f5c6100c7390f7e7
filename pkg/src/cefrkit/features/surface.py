"""Surface complexity: length counts and readability indices."""

from __future__ import annotations

import math

from cefrkit.corpus import Document
from cefrkit.features.lexical import FeatureError
from cefrkit.syllables import count_syllables

LONG_WORD_CHARS = 6          # LIX counts words longer than this
POLYSYLLABIC_MIN = 3


def compute_surface(
    doc: Document, nuclei: frozenset[str] | None = None
) -> dict[str, float | None]:
    words = doc.words()
    w = len(words)
    if w == 0:
        raise FeatureError(f"document {doc.doc_id!r} has no word tokens")
    s = len(doc.sentences)

    syllables = [count_syllables(t.form, nuclei) for t in words]
    y = sum(syllables)
    polysyllabic = sum(1 for c in syllables if c >= POLYSYLLABIC_MIN)
    long_words = sum(1 for t in words if len(t.form) > LONG_WORD_CHARS)

    return {
        "word_count": float(w),
        "sentence_count": float(s),
        "syllable_count": float(y),
        "avg_word_len": sum(len(t.form) for t in words) / w,
        "avg_sent_len": w / s,
        "polysyllabic_pct": 100.0 * polysyllabic / w,
        "lix": w / s + 100.0 * long_words / w,
        "smog": 1.0430 * math.sqrt(polysyllabic * 30.0 / s) + 3.1291,
        "fk_grade": 0.39 * (w / s) + 11.8 * (y / w) - 15.59,
    }
