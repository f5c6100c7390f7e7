"""Pluggable lexical resources: frequency ranks, function words, abstractness.

All three are plain UTF-8 files so corpora can swap in different lexicons:
frequency list (``lemma<TAB>rank``), function-word list (one entry per
line), abstractness lexicon (``lemma<TAB>rating`` with ratings 1-3).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


class ResourceError(Exception):
    pass


@dataclass(frozen=True)
class LexicalResources:
    frequency_ranks: dict[str, int] = field(default_factory=dict)
    function_words: frozenset[str] = frozenset()
    abstractness: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for lemma, rank in self.frequency_ranks.items():
            if rank < 1:
                raise ResourceError(f"frequency rank for {lemma!r} must be positive")
        for lemma, rating in self.abstractness.items():
            if rating not in (1, 2, 3):
                raise ResourceError(
                    f"abstractness rating for {lemma!r} must be 1, 2 or 3"
                )


def _read_tsv_map(path: Path, what: str) -> dict[str, int]:
    out: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ResourceError(f"{what} line {lineno}: expected 'lemma<TAB>value'")
            try:
                out[parts[0]] = int(parts[1])
            except ValueError:
                raise ResourceError(
                    f"{what} line {lineno}: non-integer value {parts[1]!r}"
                ) from None
    return out


def load_resources(directory: str | Path) -> LexicalResources:
    """Load ``frequency.tsv``, ``function_words.txt`` and ``abstractness.tsv``."""
    directory = Path(directory)
    freq_path = directory / "frequency.tsv"
    func_path = directory / "function_words.txt"
    abst_path = directory / "abstractness.tsv"
    for p in (freq_path, func_path, abst_path):
        if not p.is_file():
            raise ResourceError(f"missing resource file: {p}")

    function_words = set()
    with open(func_path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                function_words.add(word)

    return LexicalResources(
        frequency_ranks=_read_tsv_map(freq_path, "frequency list"),
        function_words=frozenset(function_words),
        abstractness=_read_tsv_map(abst_path, "abstractness lexicon"),
    )
