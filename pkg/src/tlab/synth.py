"""Seeded synthetic languages for experiments and validation runs."""

from __future__ import annotations

import random

from .corpus import GoldSegmentation, TextCorpus
from .morphology import AffixInventory, FreqLexicon, greedy_parse

DEFAULT_ALPHABET = "abcdefghijkl"


def make_vocabulary(
    seed: int,
    size: int = 50,
    alphabet: str = DEFAULT_ALPHABET,
    min_len: int = 2,
    max_len: int = 6,
    zipf_exponent: float = 1.1,
) -> tuple[tuple[str, ...], tuple[float, ...]]:
    """Random distinct words with Zipf-ish sampling weights by rank."""
    rng = random.Random(seed)
    words: list[str] = []
    seen = set()
    while len(words) < size:
        length = rng.randint(min_len, max_len)
        word = "".join(rng.choice(alphabet) for _ in range(length))
        if word not in seen:
            seen.add(word)
            words.append(word)
    weights = tuple(1.0 / (rank + 1) ** zipf_exponent for rank in range(size))
    return tuple(words), weights


def make_segmented_corpus(
    words: tuple[str, ...],
    weights: tuple[float, ...],
    seed: int,
    lines: int = 5000,
    min_words: int = 5,
    max_words: int = 12,
    spaces: bool = True,
) -> tuple[TextCorpus, GoldSegmentation]:
    """Random word sequences with their true word boundaries as gold."""
    rng = random.Random(seed)
    raw_lines = []
    gold_lines = []
    for _ in range(lines):
        count = rng.randint(min_words, max_words)
        tokens = rng.choices(words, weights=weights, k=count)
        raw_lines.append((" " if spaces else "").join(tokens))
        gold_lines.append(tuple(tokens))
    tag = "spaced" if spaces else "unspaced"
    return (
        TextCorpus(tuple(raw_lines), f"synth-{tag}-s{seed}"),
        GoldSegmentation(tuple(gold_lines)),
    )


def make_affixed_lexicon(
    seed: int,
    stems: int = 20,
    suffixes: int = 4,
    alphabet: str = DEFAULT_ALPHABET,
    frequency: int = 1,
    min_stem_len: int = 4,
    max_stem_len: int = 6,
) -> tuple[FreqLexicon, AffixInventory]:
    """stems x suffixes lexicon whose greedy parse is exactly [stem, suffix].

    Stems are resampled until no stem+suffix word strips to anything other
    than the intended two pieces, so the greedy reference is unambiguous.
    """
    rng = random.Random(seed)
    suffix_set: list[str] = []
    while len(suffix_set) < suffixes:
        length = rng.randint(2, 3)
        cand = "".join(rng.choice(alphabet) for _ in range(length))
        if cand in suffix_set:
            continue
        if any(cand.endswith(s) or s.endswith(cand) for s in suffix_set):
            continue
        suffix_set.append(cand)
    inventory = AffixInventory(frozenset(), frozenset(suffix_set), min_stem=3)

    stem_set: list[str] = []
    while len(stem_set) < stems:
        length = rng.randint(min_stem_len, max_stem_len)
        cand = "".join(rng.choice(alphabet) for _ in range(length))
        if cand in stem_set or any(cand.endswith(s) for s in suffix_set):
            continue
        if any(
            greedy_parse(cand + s, inventory).pieces != (cand, s) for s in suffix_set
        ):
            continue
        stem_set.append(cand)

    entries = {stem + suffix: frequency for stem in stem_set for suffix in suffix_set}
    return FreqLexicon(entries), inventory
