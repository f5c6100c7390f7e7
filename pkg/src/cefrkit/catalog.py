"""Feature catalog: the declared inventory of text features.

Feature ids are stable strings grouped into four categories (lexical,
morphological, surface, error). The catalog is data, not code: it ships
as JSON, can be overridden from a file, and its content hash versions
trained models so a model is never applied under a drifted catalog.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

CATEGORIES = ("lexical", "morphological", "surface", "error")

# Estonian case inventory: the 14 traditional cases plus the short
# (additive) illative that the tagger reports as a separate value.
CASES = (
    "Nom", "Gen", "Par", "Ill", "Ine", "Ela", "All", "Ade",
    "Abl", "Tra", "Trm", "Ess", "Abe", "Com", "Add",
)

WORD_POS = (
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN",
    "NUM", "PART", "PRON", "PROPN", "SCONJ", "VERB", "X",
)


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class FeatureDef:
    id: str
    category: str
    description: str
    direction_hint: str | None = None

    def __post_init__(self) -> None:
        if self.category not in CATEGORIES:
            raise CatalogError(f"feature {self.id!r}: unknown category {self.category!r}")
        if self.direction_hint not in (None, "increasing", "decreasing", "nonmonotonic"):
            raise CatalogError(
                f"feature {self.id!r}: bad direction_hint {self.direction_hint!r}"
            )


class FeatureCatalog:
    def __init__(self, features: list[FeatureDef]):
        ids = [f.id for f in features]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise CatalogError(f"duplicate feature ids: {dupes}")
        self.features = tuple(features)
        self._by_id = {f.id: f for f in features}

    def __len__(self) -> int:
        return len(self.features)

    def __iter__(self):
        return iter(self.features)

    def __contains__(self, feature_id: str) -> bool:
        return feature_id in self._by_id

    def __getitem__(self, feature_id: str) -> FeatureDef:
        return self._by_id[feature_id]

    @property
    def ids(self) -> list[str]:
        return [f.id for f in self.features]

    def by_category(self, category: str) -> list[FeatureDef]:
        return [f for f in self.features if f.category == category]

    def subset(self, feature_ids: list[str]) -> "FeatureCatalog":
        missing = [i for i in feature_ids if i not in self._by_id]
        if missing:
            raise CatalogError(f"unknown feature ids: {missing}")
        return FeatureCatalog([self._by_id[i] for i in feature_ids])

    def version_hash(self) -> str:
        """Content hash over ids and categories, in catalog order."""
        payload = json.dumps(
            [[f.id, f.category] for f in self.features], separators=(",", ":")
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def to_json(self) -> list[dict]:
        return [
            {
                "id": f.id,
                "category": f.category,
                "description": f.description,
                "direction_hint": f.direction_hint,
            }
            for f in self.features
        ]


def _lexical_defs() -> list[FeatureDef]:
    inc, dec, non = "increasing", "decreasing", "nonmonotonic"
    defs = [
        ("lemma_count", "number of distinct lemmas", inc),
        ("ttr", "type-token ratio over lemmas", non),
        ("rttr", "root type-token ratio (types / sqrt of tokens)", inc),
        ("uber", "Uber index (ln N)^2 / (ln N - ln T)", non),
        ("maas", "Maas index (ln N - ln T) / (ln N)^2", non),
        ("mtld", "measure of textual lexical diversity (threshold 0.72, two-pass mean)", inc),
        ("cvv", "corrected verb variation: verb types / sqrt(2 * verb tokens)", inc),
        ("noun_ttr", "distinct noun lemmas / noun tokens", None),
        ("verb_ttr", "distinct verb lemmas / verb tokens (VERB and AUX)", None),
        ("adj_ttr", "distinct adjective lemmas / adjective tokens", None),
        ("adv_ttr", "distinct adverb lemmas / adverb tokens", dec),
        ("conj_ttr", "distinct conjunction lemmas / conjunction tokens", None),
        ("pron_ttr", "distinct pronoun lemmas / pronoun tokens", None),
        ("rare_1000", "% of words beyond the 1,000 most frequent lemmas", non),
        ("rare_2000", "% of words beyond the 2,000 most frequent lemmas", non),
        ("rare_3000", "% of words beyond the 3,000 most frequent lemmas", non),
        ("rare_4000", "% of words beyond the 4,000 most frequent lemmas", non),
        ("rare_5000", "% of words beyond the 5,000 most frequent lemmas", inc),
        ("noun_abstractness", "mean noun abstractness on a 1-3 scale", inc),
        ("lexical_density", "% of words outside the function-word list", non),
    ]
    return [FeatureDef(i, "lexical", d, h) for i, d, h in defs]


def _nominal_block(prefix: str, label: str) -> list[FeatureDef]:
    defs = [
        FeatureDef(
            f"{prefix}_case_variety",
            "morphological",
            f"number of distinct case values among {label} tokens",
            "increasing",
        )
    ]
    for case in CASES:
        defs.append(
            FeatureDef(
                f"{prefix}_case_{case.lower()}",
                "morphological",
                f"% of {label} tokens in the {case} case",
            )
        )
    defs.append(FeatureDef(f"{prefix}_sing", "morphological", f"% of singular {label} tokens"))
    defs.append(FeatureDef(f"{prefix}_plur", "morphological", f"% of plural {label} tokens"))
    return defs


def _morphological_defs() -> list[FeatureDef]:
    defs: list[FeatureDef] = []
    for pos in WORD_POS:
        defs.append(
            FeatureDef(
                f"pos_{pos.lower()}",
                "morphological",
                f"% of {pos} tokens among words",
            )
        )
    defs.append(
        FeatureDef(
            "pos_conj",
            "morphological",
            "% of conjunction tokens among words (CCONJ and SCONJ combined)",
        )
    )
    defs.append(
        FeatureDef(
            "adp_postpos_share",
            "morphological",
            "% of postpositions among adpositions (AdpType=Post)",
        )
    )

    defs += _nominal_block("nominal", "nominal (NOUN/ADJ/PRON/NUM)")
    defs += _nominal_block("noun", "noun")
    defs += _nominal_block("adj", "adjective")
    for degree, label in (("pos", "positive"), ("cmp", "comparative"), ("sup", "superlative")):
        defs.append(
            FeatureDef(
                f"adj_degree_{degree}",
                "morphological",
                f"% of adjective tokens in the {label} degree",
            )
        )
    defs += _nominal_block("pron", "pronoun")
    for key, label in (
        ("personal", "personal (non-reflexive PronType=Prs)"),
        ("demonstrative", "demonstrative (PronType=Dem)"),
        ("int_rel", "interrogative or relative (PronType=Int/Rel)"),
        ("indefinite", "indefinite (PronType=Ind)"),
        ("reflexive", "reflexive (Reflex=Yes)"),
    ):
        defs.append(
            FeatureDef(f"pron_{key}", "morphological", f"% of {label} pronoun tokens")
        )

    verb_defs = [
        ("verb_finite", "% of finite forms among verb tokens (VERB and AUX)"),
        ("verb_nonfinite", "% of non-finite forms among verb tokens"),
        ("verb_mood_ind", "% of indicative forms among verb tokens"),
        ("verb_mood_imp", "% of imperative forms among verb tokens"),
        ("verb_mood_cnd", "% of conditional forms among verb tokens"),
        ("verb_mood_qot", "% of quotative forms among verb tokens"),
        ("verb_tense_pres", "% of present-tense forms among verb tokens"),
        ("verb_tense_past", "% of past-tense forms among verb tokens"),
        ("verb_person_1", "% of 1st-person forms among verb tokens"),
        ("verb_person_2", "% of 2nd-person forms among verb tokens"),
        ("verb_person_3", "% of 3rd-person forms among verb tokens"),
        ("verb_sing", "% of singular forms among verb tokens"),
        ("verb_plur", "% of plural forms among verb tokens"),
        ("verb_voice_act", "% of active forms among verb tokens"),
        ("verb_voice_pass", "% of passive forms among verb tokens"),
        ("verb_negative", "% of negative-form components among verb tokens (Polarity=Neg or the particle 'ei')"),
        ("verb_form_inf", "% of infinitives among verb tokens"),
        ("verb_form_sup", "% of supines among verb tokens"),
        ("verb_form_conv", "% of gerunds/converbs among verb tokens"),
        ("verb_form_part", "% of participles among verb tokens"),
    ]
    defs += [FeatureDef(i, "morphological", d) for i, d in verb_defs]
    return defs


def _surface_defs() -> list[FeatureDef]:
    inc = "increasing"
    defs = [
        ("word_count", "number of word tokens", inc),
        ("sentence_count", "number of sentences", inc),
        ("syllable_count", "total syllables over word tokens", inc),
        ("avg_word_len", "mean word length in characters", inc),
        ("avg_sent_len", "mean sentence length in words", inc),
        ("polysyllabic_pct", "% of words with three or more syllables", inc),
        ("lix", "LIX readability: words/sentence + 100 * long-word share", inc),
        ("smog", "SMOG grade: 1.0430*sqrt(polysyllables*30/sentences) + 3.1291", inc),
        ("fk_grade", "Flesch-Kincaid grade: 0.39*W/S + 11.8*Y/W - 15.59", inc),
    ]
    return [FeatureDef(i, "surface", d, h) for i, d, h in defs]


def _error_defs() -> list[FeatureDef]:
    dec = "decreasing"
    defs = [
        ("spell_words_pct", "% of words inside speller edit spans", dec),
        ("spell_sentences_pct", "% of sentences with at least one speller edit", dec),
        ("spell_edits_per_sentence", "speller edits per sentence", dec),
        ("spell_words_pct_sentence_avg", "mean per-sentence % of speller-edited words", dec),
        ("gram_edits_per_word", "grammar edits per word", dec),
        ("gram_edits_per_sentence", "grammar edits per sentence", dec),
        ("gram_sentences_pct", "% of sentences with at least one grammar edit", "nonmonotonic"),
        ("gram_span_words_pct", "% of words inside grammar edit spans", dec),
        ("gram_span_words_pct_sentence_avg", "mean per-sentence % of words inside grammar edit spans", dec),
    ]
    return [FeatureDef(i, "error", d, h) for i, d, h in defs]


def default_catalog() -> FeatureCatalog:
    return FeatureCatalog(
        _lexical_defs() + _morphological_defs() + _surface_defs() + _error_defs()
    )


def load_catalog(path: str | None = None) -> FeatureCatalog:
    """Load a catalog from a JSON file, or the shipped default."""
    if path is None:
        raw = resources.files("cefrkit.data").joinpath("catalog.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    rows = json.loads(raw)
    return FeatureCatalog(
        [
            FeatureDef(
                id=row["id"],
                category=row["category"],
                description=row.get("description", ""),
                direction_hint=row.get("direction_hint"),
            )
            for row in rows
        ]
    )


def save_catalog(catalog: FeatureCatalog, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(catalog.to_json(), fh, ensure_ascii=False, indent=1)
        fh.write("\n")
