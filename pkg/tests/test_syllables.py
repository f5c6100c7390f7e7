import pytest

from cefrkit.syllables import count_syllables, default_nuclei

# Hand-syllabified against dictionary hyphenation before the counter was
# written. Words whose vowel runs cross compound boundaries are excluded
# (documented limitation of the rule set).
SYLLABLE_FIXTURE = [
    ("ja", 1), ("ma", 1), ("töö", 1), ("maa", 1), ("pea", 1),
    ("au", 1), ("õun", 1), ("ei", 1), ("aed", 1), ("laul", 1),
    ("ema", 2), ("isa", 2), ("kala", 2), ("maja", 2), ("kool", 1),
    ("keel", 1), ("linn", 1), ("sõna", 2), ("raamat", 2), ("õpetaja", 4),
    ("ülikool", 3), ("inimene", 4), ("armastus", 3), ("sõber", 2), ("tere", 2),
    ("aitäh", 2), ("palun", 2), ("hommik", 2), ("õhtu", 2), ("päev", 1),
    ("öö", 1), ("aasta", 2), ("nädal", 2), ("tund", 1), ("minut", 2),
    ("perekond", 3), ("laps", 1), ("poiss", 1), ("tüdruk", 2), ("naine", 2),
    ("mees", 1), ("elama", 3), ("õppima", 3), ("töötama", 3), ("rääkima", 3),
    ("kirjutama", 4), ("lugema", 3), ("söömine", 3), ("joomine", 3), ("bioloogia", 5),
]


def test_single_vowel_word():
    assert count_syllables("ja") == 1


def test_vowelless_string():
    assert count_syllables("bcd") == 0


@pytest.mark.parametrize("word,expected", SYLLABLE_FIXTURE)
def test_hand_syllabified_fixture(word, expected):
    assert count_syllables(word) == expected


def test_fixture_has_fifty_words():
    assert len(SYLLABLE_FIXTURE) == 50
    assert len({w for w, _ in SYLLABLE_FIXTURE}) == 50


def test_case_insensitive():
    assert count_syllables("ÕPETAJA") == count_syllables("õpetaja")


def test_every_vowel_word_has_at_least_one_syllable():
    for word, _ in SYLLABLE_FIXTURE:
        assert count_syllables(word) >= 1


def test_custom_nuclei_set():
    # without the diphthong entry "ai", both vowels count separately
    bare = frozenset({"aa"})
    assert count_syllables("aitäh", nuclei=bare) == 3
    assert count_syllables("aitäh", nuclei=default_nuclei()) == 2
