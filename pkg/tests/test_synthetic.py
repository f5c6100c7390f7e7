import json
from pathlib import Path

import numpy as np

from cefrkit.corpus import load_corpus
from cefrkit.errors import EditAnnotationSet
from cefrkit.synthetic import PLANTS, generate_corpus


def test_generated_corpus_structure(tmp_path):
    paths = generate_corpus(tmp_path, seed=5, docs_per_level=12, test_docs_per_level=6)
    corpus = load_corpus(paths["manifest"])
    assert len(corpus) == 4 * (12 + 6)
    by_level_split = {}
    for doc in corpus:
        key = (doc.meta.level, doc.meta.split)
        by_level_split[key] = by_level_split.get(key, 0) + 1
    for level in ("A2", "B1", "B2", "C1"):
        assert by_level_split[(level, "train")] == 12
        assert by_level_split[(level, "test1")] == 6
    # C1 is argumentative-only in the design
    c1_types = {d.meta.text_type for d in corpus if d.meta.level == "C1"}
    assert c1_types == {"argumentative"}


def test_generated_resources_cover_corpus_lemmas(tmp_path):
    paths = generate_corpus(tmp_path, seed=5, docs_per_level=8, test_docs_per_level=0)
    corpus = load_corpus(paths["manifest"])
    freq = {}
    for line in Path(paths["resources"], "frequency.tsv").read_text().splitlines():
        lemma, rank = line.split("\t")
        freq[lemma] = int(rank)
    # proper nouns stay unranked on purpose (frequency lexicons omit names,
    # so they count as rare at every tier); everything else is ranked
    lemmas = {t.lemma for d in corpus for t in d.words() if t.upos != "PROPN"}
    unranked = [l for l in lemmas if l not in freq]
    assert unranked == []
    rare = [l for l, r in freq.items() if r > 5000]
    assert rare  # the dedicated rare vocabulary sits beyond the 5,000 tier


def test_edits_validate_against_documents(tmp_path):
    paths = generate_corpus(tmp_path, seed=9, docs_per_level=6, test_docs_per_level=0)
    corpus = load_corpus(paths["manifest"])
    edit_set = EditAnnotationSet.load(paths["edits"])
    from cefrkit.errors import validate_edits

    for doc in corpus:
        validate_edits(doc, edit_set.edits_for(doc.doc_id))


def test_plants_manifest_lists_roles(tmp_path):
    paths = generate_corpus(tmp_path, seed=3, docs_per_level=4, test_docs_per_level=0)
    plants = json.loads(Path(paths["plants"]).read_text())
    assert plants == PLANTS
    assert set(plants) == {"monotone", "genre_only", "exception_a", "exception_b", "noise"}
    assert len(plants["monotone"]) >= 10


def test_generation_is_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    generate_corpus(a, seed=11, docs_per_level=5, test_docs_per_level=2)
    generate_corpus(b, seed=11, docs_per_level=5, test_docs_per_level=2)
    assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()
    assert (a / "edits.json").read_bytes() == (b / "edits.json").read_bytes()
    doc = "docs/train_A2_personal_letter_000.conllu"
    assert (a / doc).read_bytes() == (b / doc).read_bytes()
    different = tmp_path / "c"
    generate_corpus(different, seed=12, docs_per_level=5, test_docs_per_level=2)
    assert (a / doc).read_bytes() != (different / doc).read_bytes()


def test_word_counts_scale_with_level(tmp_path):
    paths = generate_corpus(tmp_path, seed=21, docs_per_level=10, test_docs_per_level=0)
    corpus = load_corpus(paths["manifest"])
    means = {}
    for level in ("A2", "B1", "B2", "C1"):
        counts = [len(d.words()) for d in corpus if d.meta.level == level]
        means[level] = np.mean(counts)
    assert means["A2"] < means["B1"] < means["B2"] < means["C1"]
