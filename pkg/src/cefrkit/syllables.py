"""Rule-based syllable counting for Estonian word forms.

Counts syllable nuclei: maximal vowel runs are scanned left to right and
a pair of adjacent vowels forms one nucleus when it is a long vowel or a
diphthong from the shipped inventory, otherwise the run splits before the
second vowel. Vowel runs crossing compound boundaries ("metsaalune") are
not special-cased; keep such words out of calibration fixtures.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

VOWELS = frozenset("aeiouõäöü")


@lru_cache(maxsize=1)
def default_nuclei() -> frozenset[str]:
    """Two-vowel nuclei (long vowels and diphthongs) shipped with the package."""
    text = resources.files("cefrkit.data").joinpath("diphthongs.txt").read_text("utf-8")
    pairs = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            pairs.add(line)
    return frozenset(pairs)


def load_nuclei(path: str) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(
            line.strip() for line in fh if line.strip() and not line.startswith("#")
        )


def count_syllables(word: str, nuclei: frozenset[str] | None = None) -> int:
    """Number of syllable nuclei in ``word`` (0 if it has no vowels)."""
    if nuclei is None:
        nuclei = default_nuclei()
    lowered = word.lower()
    count = 0
    i = 0
    n = len(lowered)
    while i < n:
        if lowered[i] not in VOWELS:
            i += 1
            continue
        # consume one nucleus: a listed vowel pair, else a single vowel
        if i + 1 < n and lowered[i : i + 2] in nuclei:
            i += 2
        else:
            i += 1
        count += 1
    return count
