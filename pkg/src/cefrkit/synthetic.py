"""Seeded synthetic corpus generator.

Real examination corpora cannot be redistributed, so this generator
produces a stand-in sized like the training design (150 documents per
level, Table-1-like text-type mix, plus a stratified holdout split). The
token streams are shaped so that known feature ids carry known signals:

- monotone level-tracking features (length, diversity, morphology, error
  rates) that a correct relevance audit must accept;
- genre-only features (interjection and numeral shares) it must reject;
- one feature shaped for each documented exception path: conjunction
  share rises then falls with every break separated (exception A), and
  adjective share is monotone with text-type variation confined to the
  lowest level (exception B);
- pure-noise features (comparative-degree and conditional-mood shares).

The plant manifest (plants.json) records which feature ids carry which
role so tests can assert against it. Everything derives from one seed.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from cefrkit.catalog import CASES
from cefrkit.corpus import LEVELS, Sentence, Token, serialize_conllu
from cefrkit.errors import Edit, EditAnnotationSet

TRAIN_DESIGN = {
    "A2": [("personal_letter", 0.70), ("narrative", 0.30)],
    "B1": [("personal_letter", 0.50), ("narrative", 0.50)],
    "B2": [("personal_letter", 1 / 3), ("semi_formal_letter", 1 / 3), ("argumentative", 1 / 3)],
    "C1": [("argumentative", 1.0)],
}
TEST_DESIGN = {
    "A2": [("personal_letter", 0.5), ("narrative", 0.5)],
    "B1": [("personal_letter", 0.5), ("narrative", 0.5)],
    "B2": [("personal_letter", 1 / 3), ("semi_formal_letter", 1 / 3), ("argumentative", 1 / 3)],
    "C1": [("argumentative", 1.0)],
}

PLANTS = {
    "monotone": [
        "lemma_count", "rttr", "cvv", "mtld", "noun_abstractness", "rare_5000",
        "word_count", "sentence_count", "syllable_count", "avg_word_len",
        "avg_sent_len", "polysyllabic_pct", "lix", "smog", "fk_grade",
        "nominal_case_variety", "noun_case_variety", "nominal_case_nom",
        "nominal_case_tra", "nominal_plur", "noun_plur",
        "pron_personal", "pron_demonstrative", "verb_finite", "verb_sing",
        "spell_words_pct", "gram_edits_per_word", "gram_span_words_pct",
    ],
    "genre_only": ["pos_intj", "pos_num"],
    "exception_a": ["pos_conj"],
    "exception_b": ["pos_adj"],
    "noise": ["adj_degree_cmp", "verb_mood_cnd"],
}

_LEVEL_INDEX = {level: i for i, level in enumerate(LEVELS)}

# per-level targets (A2, B1, B2, C1)
_SENTENCES = (7.75, 13.6, 16.2, 19.2)
_WORDS_PER_SENTENCE = (6.3, 8.8, 12.0, 13.75)
_CONJ_SHARE = (0.040, 0.080, 0.120, 0.095)       # exception A shape
_ADJ_SHARE = (0.030, 0.050, 0.070, 0.090)        # exception B (A2 genre delta below)
_ADJ_A2_GENRE_DELTA = {"personal_letter": 0.015, "narrative": -0.015}
_INTJ_SHARE = {"narrative": 0.005, "personal_letter": 0.030, "semi_formal_letter": 0.030, "argumentative": 0.010}
_NUM_SHARE = {"narrative": 0.005, "personal_letter": 0.010, "semi_formal_letter": 0.040, "argumentative": 0.010}
_FIXED_SHARES = {"NOUN": 0.26, "VERB": 0.14, "AUX": 0.04, "PRON": 0.08, "ADV": 0.07, "ADP": 0.05, "PROPN": 0.015}

_VOCAB_SLICE = (0.25, 0.45, 0.70, 1.00)          # share of each bucket available
_SYLLABLE_DIST = (
    (0.35, 0.45, 0.15, 0.05),
    (0.30, 0.45, 0.18, 0.07),
    (0.25, 0.45, 0.20, 0.10),
    (0.12, 0.38, 0.30, 0.20),
)
_ABSTRACT_PROB = (0.12, 0.25, 0.40, 0.60)
_RARE_NOUN_PROB = (0.010, 0.020, 0.040, 0.080)

_PLUR_PROB = (0.07, 0.16, 0.24, 0.32)
_CASE_NOM = (0.52, 0.48, 0.42, 0.34)
_CASE_TRA = (0.002, 0.008, 0.020, 0.040)
# cases beyond Nom/Gen/Par/Tra, introduced progressively by level
_CASE_LADDER = ("Ine", "Ela", "All", "Ade", "Abl", "Com", "Ill", "Ess", "Trm", "Abe", "Add")
_CASE_LADDER_STEPS = (4, 6, 8, 11)

_PRON_PERSONAL = (0.85, 0.70, 0.50, 0.25)
_PRON_DEM = (0.08, 0.15, 0.25, 0.40)
_PRON_INT_REL = (0.02, 0.07, 0.15, 0.25)

_VERB_FIN = (0.88, 0.84, 0.72, 0.64)
_VERB_SING_GIVEN_FIN = (0.75, 0.68, 0.55, 0.48)

_SPELL_PROB = (0.060, 0.040, 0.025, 0.015)       # per word
_GRAMMAR_PER_WORD = (0.038, 0.018, 0.012, 0.008)

_CASE_SUFFIX = {
    "Nom": "", "Gen": "", "Par": "t", "Ill": "sse", "Ine": "s", "Ela": "st",
    "All": "le", "Ade": "l", "Abl": "lt", "Tra": "ks", "Trm": "ni",
    "Ess": "na", "Abe": "ta", "Com": "ga", "Add": "",
}

_UNITS = ["ta", "mi", "su", "ke", "ra", "no", "li", "pa", "vo", "mu", "sa", "te", "ki", "lo", "ne", "ja", "du", "he", "val", "kor", "sin", "met", "tus", "lik"]


class _Vocab:
    """Lemma inventories with frequency ranks and abstractness ratings."""

    def __init__(self, rng: np.random.Generator):
        self.buckets: dict[str, list[list[str]]] = {}
        made: set[str] = set()

        def make_lemma(prefix: str, syllables: int) -> str:
            while True:
                parts = [str(rng.choice(_UNITS)) for _ in range(syllables)]
                lemma = prefix + "".join(parts)
                if lemma not in made:
                    made.add(lemma)
                    return lemma

        def bucket_set(prefix: str, sizes: tuple[int, ...]) -> list[list[str]]:
            return [
                [make_lemma(prefix, syl) for _ in range(size)]
                for syl, size in enumerate(sizes, start=1)
            ]

        # 1-syllable buckets are capped by the unit inventory (24 units)
        self.buckets["NOUN"] = bucket_set("n", (20, 260, 160, 80))
        self.buckets["VERB"] = bucket_set("v", (15, 120, 60, 20))
        self.buckets["ADJ"] = bucket_set("a", (12, 80, 40, 15))
        self.buckets["ADV"] = bucket_set("d", (12, 60, 25, 10))
        self.rare_nouns = [make_lemma("x", 3) for _ in range(120)]
        self.propn = [make_lemma("p", 2).capitalize() for _ in range(40)]
        self.intj = [make_lemma("o", 1) for _ in range(6)]
        self.num = [make_lemma("k", 1) for _ in range(10)]
        self.x_words = [make_lemma("z", 2) for _ in range(40)]

        self.pron = {
            "personal": ["mina", "sina", "tema", "meie"],
            "dem": ["see", "too", "seesama"],
            "int_rel": ["kes", "mis", "milline"],
            "ind": ["keegi", "miski"],
            "refl": ["ise"],
        }
        self.cconj = ["ja", "ning", "aga", "ehk"]
        self.sconj = ["et", "kui", "sest", "kuna"]
        self.adp = ["peal", "alla", "juurde", "kaudu", "vastu"]
        self.aux = ["olema", "saama", "pidama"]

        # frequency ranks: closed classes first, then open buckets; the
        # dedicated rare nouns stay beyond the 5000 most frequent entries
        ranked: list[str] = []
        for group in (
            sum(self.pron.values(), []), self.cconj, self.sconj, self.adp,
            self.aux, self.intj, self.num,
        ):
            ranked.extend(group)
        for pos in ("NOUN", "VERB", "ADJ", "ADV"):
            for bucket in self.buckets[pos]:
                ranked.extend(bucket)
        ranked.extend(self.x_words)
        self.frequency_ranks = {lemma: i + 1 for i, lemma in enumerate(ranked)}
        for i, lemma in enumerate(self.rare_nouns):
            self.frequency_ranks[lemma] = 5001 + i

        self.abstractness: dict[str, int] = {}
        noun_pool = [l for bucket in self.buckets["NOUN"] for l in bucket]
        for lemma in noun_pool:
            self.abstractness[lemma] = int(rng.choice([1, 2]))
        self.abstract_nouns = [l for l in noun_pool if rng.random() < 0.35]
        for lemma in self.abstract_nouns:
            self.abstractness[lemma] = 3
        for lemma in self.rare_nouns:
            self.abstractness[lemma] = 3

        self.function_words = sorted(
            set(sum(self.pron.values(), []) + self.cconj + self.sconj + self.adp + self.aux)
        )

    def sample_open(self, rng, pos: str, level_idx: int) -> str:
        syl = int(rng.choice(4, p=_SYLLABLE_DIST[level_idx]))
        bucket = self.buckets[pos][syl]
        limit = max(2, int(len(bucket) * _VOCAB_SLICE[level_idx]))
        # zipf-ish: geometric preference for early lemmas in the slice
        p = min(3.0 / limit, 0.9)
        idx = min(int(rng.geometric(p)) - 1, limit - 1)
        return bucket[idx]


def _upos_weights(level_idx: int, text_type: str) -> tuple[list[str], np.ndarray]:
    shares = dict(_FIXED_SHARES)
    shares["CCONJ"] = 0.7 * _CONJ_SHARE[level_idx]
    shares["SCONJ"] = 0.3 * _CONJ_SHARE[level_idx]
    adj = _ADJ_SHARE[level_idx]
    if level_idx == 0:
        adj += _ADJ_A2_GENRE_DELTA.get(text_type, 0.0)
    shares["ADJ"] = adj
    shares["INTJ"] = _INTJ_SHARE[text_type]
    shares["NUM"] = _NUM_SHARE[text_type]
    shares["X"] = 1.0 - sum(shares.values())
    if shares["X"] < 0.0:
        raise ValueError("upos shares exceed 1; check generator targets")
    labels = sorted(shares)
    return labels, np.array([shares[l] for l in labels])


def _case_distribution(level_idx: int) -> tuple[list[str], np.ndarray]:
    nom = _CASE_NOM[level_idx]
    tra = _CASE_TRA[level_idx]
    ladder = _CASE_LADDER[: _CASE_LADDER_STEPS[level_idx]]
    rest = 1.0 - nom - tra
    gen, par = 0.45 * rest, 0.30 * rest
    other = rest - gen - par
    cases = ["Nom", "Gen", "Par", "Tra", *ladder]
    weights = [nom, gen, par, tra] + [other / len(ladder)] * len(ladder)
    return cases, np.array(weights)


def _nominal_feats(rng, level_idx: int) -> dict[str, str]:
    cases, weights = _case_distribution(level_idx)
    case = str(rng.choice(cases, p=weights / weights.sum()))
    number = "Plur" if rng.random() < _PLUR_PROB[level_idx] else "Sing"
    return {"Case": case, "Number": number}


def _inflect_nominal(lemma: str, feats: dict[str, str]) -> str:
    form = lemma
    if feats.get("Number") == "Plur":
        form += "de"
    return form + _CASE_SUFFIX[feats["Case"]]


def _verb_token(rng, vocab: _Vocab, level_idx: int, upos: str) -> tuple[str, str, dict[str, str]]:
    lemma = vocab.aux[int(rng.integers(len(vocab.aux)))] if upos == "AUX" else vocab.sample_open(rng, "VERB", level_idx)
    finite = upos == "AUX" or rng.random() < _VERB_FIN[level_idx]
    feats: dict[str, str] = {}
    if finite:
        feats["VerbForm"] = "Fin"
        feats["Mood"] = str(rng.choice(["Ind", "Cnd", "Imp", "Qot"], p=[0.90, 0.05, 0.03, 0.02]))
        feats["Tense"] = "Pres" if rng.random() < 0.7 else "Past"
        feats["Person"] = str(rng.choice(["1", "2", "3"], p=[0.4, 0.1, 0.5]))
        feats["Number"] = "Sing" if rng.random() < _VERB_SING_GIVEN_FIN[level_idx] else "Plur"
        feats["Voice"] = "Act" if rng.random() < 0.93 else "Pass"
        if rng.random() < 0.05:
            feats["Polarity"] = "Neg"
        if feats["Number"] == "Sing":
            suffix = {"1": "n", "2": "d", "3": "b"}[feats["Person"]]
        else:
            suffix = {"1": "me", "2": "te", "3": "vad"}[feats["Person"]]
        if feats["Tense"] == "Past":
            suffix = {"1": "sin", "2": "sid", "3": "s"}[feats["Person"]] if feats["Number"] == "Sing" else "sid"
        form = lemma + suffix
    else:
        verb_form = str(rng.choice(["Inf", "Sup", "Conv", "Part"], p=[0.5, 0.3, 0.1, 0.1]))
        feats["VerbForm"] = verb_form
        form = lemma + {"Inf": "da", "Sup": "ma", "Conv": "des", "Part": "nud"}[verb_form]
    feats = dict(sorted(feats.items()))
    return form, lemma, feats


def _pron_token(rng, vocab: _Vocab, level_idx: int) -> tuple[str, str, dict[str, str]]:
    kind = str(
        rng.choice(
            ["personal", "dem", "int_rel", "ind", "refl"],
            p=_pron_type_probs(level_idx),
        )
    )
    lemma = vocab.pron[kind][int(rng.integers(len(vocab.pron[kind])))]
    feats = _nominal_feats(rng, level_idx)
    if kind == "personal":
        feats["PronType"] = "Prs"
    elif kind == "dem":
        feats["PronType"] = "Dem"
    elif kind == "int_rel":
        feats["PronType"] = "Int,Rel"
    elif kind == "ind":
        feats["PronType"] = "Ind"
    else:
        feats["PronType"] = "Prs"
        feats["Reflex"] = "Yes"
    feats = dict(sorted(feats.items()))
    return _inflect_nominal(lemma, feats), lemma, feats


def _pron_type_probs(level_idx: int) -> list[float]:
    personal = _PRON_PERSONAL[level_idx]
    dem = _PRON_DEM[level_idx]
    int_rel = _PRON_INT_REL[level_idx]
    rest = max(1.0 - personal - dem - int_rel, 0.02)
    return [personal, dem, int_rel, rest * 0.7, rest * 0.3]


def _make_token(rng, vocab: _Vocab, upos: str, level_idx: int) -> tuple[str, str, str, dict[str, str]]:
    if upos == "NOUN":
        if rng.random() < _RARE_NOUN_PROB[level_idx]:
            lemma = vocab.rare_nouns[int(rng.integers(len(vocab.rare_nouns)))]
        elif rng.random() < _ABSTRACT_PROB[level_idx]:
            lemma = vocab.abstract_nouns[int(rng.integers(len(vocab.abstract_nouns)))]
        else:
            lemma = vocab.sample_open(rng, "NOUN", level_idx)
        feats = _nominal_feats(rng, level_idx)
        return _inflect_nominal(lemma, feats), lemma, upos, feats
    if upos == "ADJ":
        lemma = vocab.sample_open(rng, "ADJ", level_idx)
        feats = _nominal_feats(rng, level_idx)
        feats["Degree"] = str(rng.choice(["Pos", "Cmp", "Sup"], p=[0.85, 0.10, 0.05]))
        feats = dict(sorted(feats.items()))
        return _inflect_nominal(lemma, feats), lemma, upos, feats
    if upos == "NUM":
        lemma = vocab.num[int(rng.integers(len(vocab.num)))]
        feats = _nominal_feats(rng, level_idx)
        feats["NumType"] = "Card"
        feats = dict(sorted(feats.items()))
        return _inflect_nominal(lemma, feats), lemma, upos, feats
    if upos == "PRON":
        form, lemma, feats = _pron_token(rng, vocab, level_idx)
        return form, lemma, upos, feats
    if upos in ("VERB", "AUX"):
        form, lemma, feats = _verb_token(rng, vocab, level_idx, upos)
        return form, lemma, upos, feats
    if upos == "ADV":
        lemma = vocab.sample_open(rng, "ADV", level_idx)
        return lemma, lemma, upos, {}
    if upos == "ADP":
        lemma = vocab.adp[int(rng.integers(len(vocab.adp)))]
        return lemma, lemma, upos, {"AdpType": "Post" if rng.random() < 0.6 else "Prep"}
    if upos == "CCONJ":
        lemma = vocab.cconj[int(rng.integers(len(vocab.cconj)))]
        return lemma, lemma, upos, {}
    if upos == "SCONJ":
        lemma = vocab.sconj[int(rng.integers(len(vocab.sconj)))]
        return lemma, lemma, upos, {}
    if upos == "INTJ":
        lemma = vocab.intj[int(rng.integers(len(vocab.intj)))]
        return lemma, lemma, upos, {}
    if upos == "PROPN":
        lemma = vocab.propn[int(rng.integers(len(vocab.propn)))]
        return lemma, lemma, upos, {"Case": "Nom", "Number": "Sing"}
    if upos == "X":
        lemma = vocab.x_words[int(rng.integers(len(vocab.x_words)))]
        return lemma, lemma, upos, {}
    raise ValueError(f"unhandled upos {upos}")


def generate_document(rng, vocab: _Vocab, level: str, text_type: str) -> list[Sentence]:
    level_idx = _LEVEL_INDEX[level]
    labels, weights = _upos_weights(level_idx, text_type)
    n_sentences = max(3, int(round(rng.normal(_SENTENCES[level_idx], 0.18 * _SENTENCES[level_idx]))))
    sentences = []
    for _ in range(n_sentences):
        n_words = max(3, int(round(rng.normal(_WORDS_PER_SENTENCE[level_idx], 1.5))))
        tokens = []
        for i in range(n_words):
            upos = str(rng.choice(labels, p=weights / weights.sum()))
            form, lemma, upos, feats = _make_token(rng, vocab, upos, level_idx)
            tokens.append(Token(index=i + 1, form=form, lemma=lemma, upos=upos, feats=feats))
        tokens.append(Token(index=n_words + 1, form=".", lemma=".", upos="PUNCT"))
        sentences.append(Sentence(tokens=tuple(tokens)))
    return sentences


def generate_edits(rng, sentences: list[Sentence], level: str) -> list[Edit]:
    level_idx = _LEVEL_INDEX[level]
    edits: list[Edit] = []
    for sent_idx, sentence in enumerate(sentences):
        word_positions = [i for i, t in enumerate(sentence.tokens) if t.is_word]
        spelled = [p for p in word_positions if rng.random() < _SPELL_PROB[level_idx]]
        for pos in spelled:
            edits.append(
                Edit(
                    tool="speller",
                    sentence_index=sent_idx,
                    start=pos,
                    end=pos + 1,
                    replacement=(sentence.tokens[pos].form + "x",),
                )
            )
        expected = _GRAMMAR_PER_WORD[level_idx] * len(word_positions)
        n_gram = int(rng.poisson(expected))
        taken: list[tuple[int, int]] = []
        for _ in range(n_gram):
            span_len = int(rng.integers(2, 5))
            if len(sentence.tokens) <= span_len:
                continue
            for _attempt in range(4):
                start = int(rng.integers(0, len(sentence.tokens) - span_len))
                end = start + span_len
                if all(end <= a or start >= b for a, b in taken):
                    taken.append((start, end))
                    edits.append(
                        Edit(
                            tool="grammar",
                            sentence_index=sent_idx,
                            start=start,
                            end=end,
                            replacement=tuple(t.form for t in sentence.tokens[start:end]),
                        )
                    )
                    break
    return edits


def _design_counts(design: dict, per_level: int) -> dict[str, list[tuple[str, int]]]:
    out = {}
    for level, mix in design.items():
        rows = []
        remaining = per_level
        for text_type, share in mix[:-1]:
            count = int(round(per_level * share))
            rows.append((text_type, count))
            remaining -= count
        rows.append((mix[-1][0], remaining))
        out[level] = rows
    return out


def generate_corpus(
    out_dir: str | Path,
    seed: int = 42,
    docs_per_level: int = 150,
    test_docs_per_level: int = 30,
) -> dict:
    """Write a complete synthetic corpus tree; returns the key paths.

    Layout: docs/*.conllu, manifest.json, edits.json, plants.json and
    resources/{frequency.tsv,function_words.txt,abstractness.tsv}.
    """
    out_dir = Path(out_dir)
    (out_dir / "docs").mkdir(parents=True, exist_ok=True)
    (out_dir / "resources").mkdir(exist_ok=True)

    master = np.random.default_rng(seed)
    vocab = _Vocab(master)

    manifest_rows = []
    edit_set = EditAnnotationSet()
    plan = [("train", _design_counts(TRAIN_DESIGN, docs_per_level))]
    if test_docs_per_level > 0:
        plan.append(("test1", _design_counts(TEST_DESIGN, test_docs_per_level)))

    for split, design in plan:
        for level in LEVELS:
            for text_type, count in design[level]:
                for i in range(count):
                    doc_id = f"{split}_{level}_{text_type}_{i:03d}"
                    doc_rng = np.random.default_rng(master.integers(0, 2**63 - 1))
                    sentences = generate_document(doc_rng, vocab, level, text_type)
                    rel = f"docs/{doc_id}.conllu"
                    (out_dir / rel).write_text(serialize_conllu(sentences), encoding="utf-8")
                    manifest_rows.append(
                        {
                            "doc_id": doc_id,
                            "file": rel,
                            "level": level,
                            "text_type": text_type,
                            "split": split,
                        }
                    )
                    edit_set.set_edits(doc_id, generate_edits(doc_rng, sentences, level))

    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest_rows, indent=1) + "\n", encoding="utf-8")
    edit_set.save(out_dir / "edits.json")

    freq_lines = [f"{lemma}\t{rank}" for lemma, rank in sorted(vocab.frequency_ranks.items(), key=lambda kv: kv[1])]
    (out_dir / "resources" / "frequency.tsv").write_text("\n".join(freq_lines) + "\n", encoding="utf-8")
    (out_dir / "resources" / "function_words.txt").write_text("\n".join(vocab.function_words) + "\n", encoding="utf-8")
    abst_lines = [f"{lemma}\t{rating}" for lemma, rating in sorted(vocab.abstractness.items())]
    (out_dir / "resources" / "abstractness.tsv").write_text("\n".join(abst_lines) + "\n", encoding="utf-8")
    (out_dir / "plants.json").write_text(json.dumps(PLANTS, indent=1) + "\n", encoding="utf-8")

    return {
        "manifest": str(manifest_path),
        "edits": str(out_dir / "edits.json"),
        "resources": str(out_dir / "resources"),
        "plants": str(out_dir / "plants.json"),
    }
