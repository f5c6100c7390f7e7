import numpy as np
import pytest

from cefrkit.corpus import DocMeta, Document, Sentence, Token


def make_token(index, form, lemma=None, upos="NOUN", feats=None, misc=""):
    return Token(
        index=index,
        form=form,
        lemma=lemma if lemma is not None else form,
        upos=upos,
        feats=feats or {},
        misc=misc,
    )


def make_sentence(specs):
    """Build a Sentence from (form, lemma, upos, feats) tuples."""
    tokens = []
    for i, spec in enumerate(specs, start=1):
        form, lemma, upos = spec[0], spec[1], spec[2]
        feats = spec[3] if len(spec) > 3 else {}
        tokens.append(make_token(i, form, lemma, upos, feats))
    return Sentence(tokens=tuple(tokens))


def make_doc(sentences, doc_id="doc", level="A2", text_type="narrative", split="train"):
    return Document(
        doc_id=doc_id,
        sentences=tuple(sentences),
        meta=DocMeta(level=level, text_type=text_type, split=split),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240805)
