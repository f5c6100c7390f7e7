"""Morphological features: PoS distribution and grammatical categories.

Percentages over word tokens for PoS features; class-conditional blocks
(case, number, degree, pronoun type, verb categories) use the class token
count as denominator and go degenerate when the class is absent. Case
variety for an absent class is 0, not degenerate.
"""

from __future__ import annotations

from cefrkit.catalog import CASES, WORD_POS
from cefrkit.corpus import Document, Token

NOMINAL_POS = ("NOUN", "ADJ", "PRON", "NUM")
VERB_POS = ("VERB", "AUX")
NEGATIVE_PARTICLE = "ei"


def _values_of(token: Token, feat: str) -> set[str]:
    raw = token.feats.get(feat)
    return set(raw.split(",")) if raw else set()


def _case_number_block(
    prefix: str, tokens: list[Token]
) -> dict[str, float | None]:
    out: dict[str, float | None] = {}
    cases_seen = {t.feats["Case"] for t in tokens if "Case" in t.feats}
    out[f"{prefix}_case_variety"] = float(len(cases_seen))
    n = len(tokens)
    if n == 0:
        for case in CASES:
            out[f"{prefix}_case_{case.lower()}"] = None
        out[f"{prefix}_sing"] = None
        out[f"{prefix}_plur"] = None
        return out
    for case in CASES:
        hits = sum(1 for t in tokens if t.feats.get("Case") == case)
        out[f"{prefix}_case_{case.lower()}"] = 100.0 * hits / n
    out[f"{prefix}_sing"] = 100.0 * sum(
        1 for t in tokens if t.feats.get("Number") == "Sing"
    ) / n
    out[f"{prefix}_plur"] = 100.0 * sum(
        1 for t in tokens if t.feats.get("Number") == "Plur"
    ) / n
    return out


def _share(count: int, total: int) -> float | None:
    return 100.0 * count / total if total else None


def compute_morphological(doc: Document) -> dict[str, float | None]:
    words = doc.words()
    w = len(words)
    if w == 0:
        from cefrkit.features.lexical import FeatureError

        raise FeatureError(f"document {doc.doc_id!r} has no word tokens")

    values: dict[str, float | None] = {}
    by_pos: dict[str, list[Token]] = {pos: [] for pos in WORD_POS}
    for tok in words:
        by_pos.setdefault(tok.upos, []).append(tok)

    for pos in WORD_POS:
        values[f"pos_{pos.lower()}"] = 100.0 * len(by_pos[pos]) / w
    values["pos_conj"] = 100.0 * (len(by_pos["CCONJ"]) + len(by_pos["SCONJ"])) / w

    adps = by_pos["ADP"]
    values["adp_postpos_share"] = _share(
        sum(1 for t in adps if t.feats.get("AdpType") == "Post"), len(adps)
    )

    nominals = [t for t in words if t.upos in NOMINAL_POS]
    values.update(_case_number_block("nominal", nominals))
    values.update(_case_number_block("noun", by_pos["NOUN"]))

    adjs = by_pos["ADJ"]
    values.update(_case_number_block("adj", adjs))
    for degree in ("Pos", "Cmp", "Sup"):
        values[f"adj_degree_{degree.lower()}"] = _share(
            sum(1 for t in adjs if t.feats.get("Degree") == degree), len(adjs)
        )

    prons = by_pos["PRON"]
    values.update(_case_number_block("pron", prons))
    n_pron = len(prons)
    reflexive = [t for t in prons if "Yes" in _values_of(t, "Reflex")]
    personal = [
        t
        for t in prons
        if "Prs" in _values_of(t, "PronType") and "Yes" not in _values_of(t, "Reflex")
    ]
    values["pron_personal"] = _share(len(personal), n_pron)
    values["pron_demonstrative"] = _share(
        sum(1 for t in prons if "Dem" in _values_of(t, "PronType")), n_pron
    )
    values["pron_int_rel"] = _share(
        sum(1 for t in prons if _values_of(t, "PronType") & {"Int", "Rel"}), n_pron
    )
    values["pron_indefinite"] = _share(
        sum(1 for t in prons if "Ind" in _values_of(t, "PronType")), n_pron
    )
    values["pron_reflexive"] = _share(len(reflexive), n_pron)

    verbs = [t for t in words if t.upos in VERB_POS]
    n_verb = len(verbs)

    def verb_share(predicate) -> float | None:
        return _share(sum(1 for t in verbs if predicate(t)), n_verb)

    values["verb_finite"] = verb_share(lambda t: t.feats.get("VerbForm") == "Fin")
    values["verb_nonfinite"] = verb_share(
        lambda t: t.feats.get("VerbForm") in ("Inf", "Sup", "Conv", "Part")
    )
    for mood in ("Ind", "Imp", "Cnd", "Qot"):
        values[f"verb_mood_{mood.lower()}"] = verb_share(
            lambda t, m=mood: t.feats.get("Mood") == m
        )
    for tense in ("Pres", "Past"):
        values[f"verb_tense_{tense.lower()}"] = verb_share(
            lambda t, x=tense: t.feats.get("Tense") == x
        )
    for person in ("1", "2", "3"):
        values[f"verb_person_{person}"] = verb_share(
            lambda t, p=person: t.feats.get("Person") == p
        )
    values["verb_sing"] = verb_share(lambda t: t.feats.get("Number") == "Sing")
    values["verb_plur"] = verb_share(lambda t: t.feats.get("Number") == "Plur")
    values["verb_voice_act"] = verb_share(lambda t: t.feats.get("Voice") == "Act")
    values["verb_voice_pass"] = verb_share(lambda t: t.feats.get("Voice") == "Pass")
    values["verb_negative"] = verb_share(
        lambda t: t.feats.get("Polarity") == "Neg" or t.lemma == NEGATIVE_PARTICLE
    )
    for form, key in (("Inf", "inf"), ("Sup", "sup"), ("Conv", "conv"), ("Part", "part")):
        values[f"verb_form_{key}"] = verb_share(
            lambda t, f=form: t.feats.get("VerbForm") == f
        )
    return values
