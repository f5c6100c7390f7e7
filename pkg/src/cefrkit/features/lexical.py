"""Lexical diversity, sophistication and density features.

Types are lemmas throughout, so inflectional variety does not inflate
diversity scores. Rare-vocabulary tiers count a token as rare when its
lemma ranks beyond the tier or is absent from the frequency list.
"""

from __future__ import annotations

import math

from cefrkit.corpus import Document, Token
from cefrkit.resources import LexicalResources

MTLD_THRESHOLD = 0.72

# PoS classes for class-specific type-token ratios
_TTR_CLASSES = {
    "noun_ttr": ("NOUN",),
    "verb_ttr": ("VERB", "AUX"),
    "adj_ttr": ("ADJ",),
    "adv_ttr": ("ADV",),
    "conj_ttr": ("CCONJ", "SCONJ"),
    "pron_ttr": ("PRON",),
}


class FeatureError(Exception):
    pass


def _mtld_pass(lemmas: list[str], threshold: float = MTLD_THRESHOLD) -> float | None:
    """Factor count of one MTLD pass; None when no factor completes."""
    factors = 0.0
    types: set[str] = set()
    tokens = 0
    for lemma in lemmas:
        tokens += 1
        types.add(lemma)
        if len(types) / tokens <= threshold:
            factors += 1.0
            types = set()
            tokens = 0
    if tokens > 0:
        remainder_ttr = len(types) / tokens
        factors += (1.0 - remainder_ttr) / (1.0 - threshold)
    if factors == 0.0:
        return None
    return len(lemmas) / factors


def mtld(lemmas: list[str], threshold: float = MTLD_THRESHOLD) -> float | None:
    """Mean of the forward and reversed MTLD passes."""
    forward = _mtld_pass(lemmas, threshold)
    backward = _mtld_pass(lemmas[::-1], threshold)
    if forward is None or backward is None:
        return None
    return (forward + backward) / 2.0


def compute_diversity(doc: Document) -> dict[str, float | None]:
    words = doc.words()
    n = len(words)
    if n == 0:
        raise FeatureError(f"document {doc.doc_id!r} has no word tokens")
    lemmas = [t.lemma for t in words]
    t_count = len(set(lemmas))

    values: dict[str, float | None] = {
        "lemma_count": float(t_count),
        "ttr": t_count / n,
        "rttr": t_count / math.sqrt(n),
        "mtld": mtld(lemmas),
    }

    if t_count == n:
        # all lemmas distinct: ln N - ln T = 0
        values["uber"] = None
        values["maas"] = None
    else:
        log_n = math.log(n)
        log_t = math.log(t_count)
        values["uber"] = log_n**2 / (log_n - log_t)
        values["maas"] = (log_n - log_t) / log_n**2

    verb_tokens = [t for t in words if t.upos in ("VERB", "AUX")]
    if verb_tokens:
        verb_types = len({t.lemma for t in verb_tokens})
        values["cvv"] = verb_types / math.sqrt(2 * len(verb_tokens))
    else:
        values["cvv"] = None

    for feature_id, classes in _TTR_CLASSES.items():
        class_tokens = [t for t in words if t.upos in classes]
        if class_tokens:
            values[feature_id] = len({t.lemma for t in class_tokens}) / len(class_tokens)
        else:
            values[feature_id] = None
    return values


def _is_function_word(token: Token, function_words: frozenset[str]) -> bool:
    return token.lemma in function_words or token.form.lower() in function_words


def compute_sophistication_density(
    doc: Document, res: LexicalResources
) -> dict[str, float | None]:
    words = doc.words()
    n = len(words)
    if n == 0:
        raise FeatureError(f"document {doc.doc_id!r} has no word tokens")

    values: dict[str, float | None] = {}
    ranks = [res.frequency_ranks.get(t.lemma) for t in words]
    for tier in (1000, 2000, 3000, 4000, 5000):
        rare = sum(1 for r in ranks if r is None or r > tier)
        values[f"rare_{tier}"] = 100.0 * rare / n

    ratings = [
        res.abstractness[t.lemma]
        for t in words
        if t.upos == "NOUN" and t.lemma in res.abstractness
    ]
    values["noun_abstractness"] = sum(ratings) / len(ratings) if ratings else None

    content = sum(1 for t in words if not _is_function_word(t, res.function_words))
    values["lexical_density"] = 100.0 * content / n
    return values
