"""Subword segmentation of a frequency lexicon and a greedy affix reference."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .corpus import DataError, TextCorpus, _decode, _split_lines
from .metrics import (
    TokenStats,
    anti_entropy,
    boundary_counts,
    compression_factor,
    f1_score,
)
from .ngram import TransitionModel, build_model, prune
from .segmenter import SegmenterParams, segment


@dataclass
class FreqLexicon:
    """word -> occurrence count; words are non-empty and whitespace-free."""

    entries: dict[str, int]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AffixInventory:
    prefixes: frozenset[str]
    suffixes: frozenset[str]
    min_stem: int = 3

    def __post_init__(self) -> None:
        if self.min_stem < 1:
            raise DataError(f"min_stem must be >= 1, got {self.min_stem}")
        for affix in (*self.prefixes, *self.suffixes):
            if not affix or affix != affix.casefold():
                raise DataError(f"affixes must be non-empty and lowercase, got {affix!r}")


@dataclass(frozen=True)
class MorphParse:
    pieces: tuple[str, ...]

    @property
    def word(self) -> str:
        return "".join(self.pieces)


def load_lexicon(path: str | Path) -> FreqLexicon:
    """Read `word<TAB>count` entries; a missing count defaults to 1.

    Blank lines are skipped; duplicate words accumulate their counts.
    """
    entries: dict[str, int] = {}
    for lineno, raw in enumerate(_split_lines(_decode(path)), start=1):
        if not raw.strip():
            continue
        word, _, count_text = raw.partition("\t")
        if not word or any(ch.isspace() for ch in word):
            raise DataError(f"{path}:{lineno}: bad lexicon word {word!r}")
        if count_text:
            try:
                count = int(count_text)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad count {count_text!r}") from exc
            if count < 1:
                raise DataError(f"{path}:{lineno}: count must be positive")
        else:
            count = 1
        entries[word] = entries.get(word, 0) + count
    return FreqLexicon(entries)


def load_affixes(path: str | Path) -> frozenset[str]:
    """One affix per line; blank lines and `#` comment lines are skipped."""
    affixes = set()
    for raw in _split_lines(_decode(path)):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        affixes.add(text.casefold())
    return frozenset(affixes)


def filter_lexicon(lexicon: FreqLexicon, min_word_len: int) -> FreqLexicon:
    """Keep words strictly longer than ``min_word_len``; 0 keeps everything."""
    return FreqLexicon({w: c for w, c in lexicon.entries.items() if len(w) > min_word_len})


def build_morph_model(lexicon: FreqLexicon, n_max: int) -> TransitionModel:
    """Transition model over the lexicon, edge counts weighted by word frequency."""
    if not lexicon.entries:
        raise DataError("cannot build a model from an empty lexicon")
    words = tuple(lexicon.entries)
    weights = tuple(lexicon.entries[w] for w in words)
    return build_model(TextCorpus(words, "lexicon"), n_max, line_weights=weights)


def greedy_parse(word: str, inventory: AffixInventory, stack_affixes: bool = True) -> MorphParse:
    """Strip longest matching prefixes, then longest suffixes, keeping the stem
    at least ``min_stem`` long. Matching is case-folded; pieces keep original
    casing. With ``stack_affixes`` False at most one prefix and one suffix come off.
    """
    if not word:
        raise DataError("cannot parse an empty word")
    start, end = 0, len(word)
    front: list[str] = []
    back: list[str] = []

    def longest(affixes: Iterable[str], at_front: bool) -> str | None:
        best = None
        for affix in affixes:
            k = len(affix)
            if end - start - k < inventory.min_stem:
                continue
            piece = word[start : start + k] if at_front else word[end - k : end]
            if piece.casefold() == affix and (best is None or k > len(best)):
                best = affix
        return best

    while True:
        match = longest(inventory.prefixes, at_front=True)
        if match is None:
            break
        front.append(word[start : start + len(match)])
        start += len(match)
        if not stack_affixes:
            break
    while True:
        match = longest(inventory.suffixes, at_front=False)
        if match is None:
            break
        back.append(word[end - len(match) : end])
        end -= len(match)
        if not stack_affixes:
            break
    return MorphParse((*front, word[start:end], *reversed(back)))


def morph_segment(model: TransitionModel, word: str, params: SegmenterParams) -> MorphParse:
    """Freedom-peak segmentation of a single word."""
    return MorphParse(segment(model, word, params).tokens)


def weighted_morph_f1(
    model: TransitionModel,
    lexicon: FreqLexicon,
    inventory: AffixInventory,
    params: SegmenterParams,
) -> tuple[float, float, float]:
    """Score freedom-peak parses against the greedy reference over a lexicon.

    Per-word boundary F1 values are averaged with word-frequency weights;
    anti-entropy and compression factor accumulate every word's pieces with
    multiplicity equal to its frequency.
    """
    if not lexicon.entries:
        raise DataError("cannot evaluate an empty lexicon")
    pruned = prune(model, params.prune_threshold)
    word_params = replace(params, prune_threshold=0)
    f1_weighted = 0.0
    total_weight = 0
    piece_counts: dict[str, int] = {}
    total_tokens = 0
    total_chars = 0
    for word, freq in lexicon.entries.items():
        predicted = segment(pruned, word, word_params).tokens
        reference = greedy_parse(word, inventory).pieces
        f1_weighted += freq * f1_score(boundary_counts([predicted], [reference]))
        total_weight += freq
        for piece in predicted:
            piece_counts[piece] = piece_counts.get(piece, 0) + freq
        total_tokens += freq * len(predicted)
        total_chars += freq * len(word)
    stats = TokenStats(piece_counts, total_tokens, total_chars)
    return f1_weighted / total_weight, anti_entropy(stats), compression_factor(stats)
