import pytest

from cefrkit.features.surface import compute_surface
from cefrkit.syllables import count_syllables

from .conftest import make_doc, make_sentence

# forms with known syllable counts under the shipped rule set
POLY = "õpetaja"   # 4 syllables, 7 characters (> 6, LIX-long)
SHORT = "ja"       # 1 syllable, 2 characters


def build_doc(sentence_word_counts, poly_positions):
    """Doc with given words per sentence; poly_positions is a set of
    (sentence, word) slots that get the polysyllabic long word."""
    sentences = []
    for s, n_words in enumerate(sentence_word_counts):
        specs = []
        for i in range(n_words):
            form = POLY if (s, i) in poly_positions else SHORT
            specs.append((form, form, "NOUN"))
        specs.append((".", ".", "PUNCT"))
        sentences.append(make_sentence(specs))
    return make_doc(sentences)


def test_smog_hand_evaluated():
    # 10 sentences, 27 polysyllabic words: smog = 1.0430 * 9 + 3.1291
    counts = [10] * 10
    poly = {(s, i) for s in range(9) for i in range(3)}  # 27 slots
    doc = build_doc(counts, poly)
    values = compute_surface(doc)
    assert values["sentence_count"] == 10
    assert values["smog"] == pytest.approx(12.5161, abs=1e-4)


def test_lix_hand_evaluated():
    # 100 words over 10 sentences, 25 long words: lix = 10 + 25 = 35
    counts = [10] * 10
    poly = {(s, i) for s in range(5) for i in range(5)}  # 25 long words
    doc = build_doc(counts, poly)
    values = compute_surface(doc)
    assert values["word_count"] == 100
    assert values["lix"] == pytest.approx(35.0, abs=1e-12)


def test_counts_and_averages_match_recount():
    counts = [4, 7, 5]
    poly = {(0, 0), (1, 3), (2, 2), (2, 4)}
    doc = build_doc(counts, poly)
    values = compute_surface(doc)

    words = doc.words()
    w = len(words)
    s = len(doc.sentences)
    y = sum(count_syllables(t.form) for t in words)
    assert values["word_count"] == w == sum(counts)
    assert values["syllable_count"] == y
    assert values["avg_sent_len"] == pytest.approx(w / s)
    assert values["avg_word_len"] == pytest.approx(sum(len(t.form) for t in words) / w)
    assert values["polysyllabic_pct"] == pytest.approx(100.0 * 4 / w)
    assert values["fk_grade"] == pytest.approx(0.39 * w / s + 11.8 * y / w - 15.59)


def test_punctuation_not_counted_as_words():
    doc = build_doc([3], set())
    values = compute_surface(doc)
    assert values["word_count"] == 3  # the "." token is excluded
