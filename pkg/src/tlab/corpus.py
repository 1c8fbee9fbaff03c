"""Corpus ingestion: raw text, gold segmentations, splits, and sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence


class DataError(Exception):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class TextCorpus:
    """An ordered sequence of non-empty text lines."""

    lines: tuple[str, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class GoldSegmentation:
    """Reference tokenization, one token tuple per line.

    ``dropped`` counts input lines that contained no tokens and were skipped.
    """

    lines: tuple[tuple[str, ...], ...]
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.lines)


class SplitPair(NamedTuple):
    part_a: TextCorpus
    part_b: TextCorpus


def _decode(path: str | Path) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc


def _split_lines(text: str) -> list[str]:
    # LF or CRLF terminators only; any other control character stays in the line
    pieces = text.split("\n")
    if pieces and pieces[-1] == "":
        pieces.pop()
    return [p[:-1] if p.endswith("\r") else p for p in pieces]


def load_text(path: str | Path, source_id: str | None = None) -> TextCorpus:
    """Read a UTF-8 corpus, one line per entry; empty lines are dropped.

    No normalization beyond terminator stripping: case, punctuation and
    interior whitespace are preserved exactly.
    """
    lines = [line for line in _split_lines(_decode(path)) if line]
    return TextCorpus(tuple(lines), source_id if source_id is not None else str(path))


def load_gold(path: str | Path) -> GoldSegmentation:
    """Read a reference segmentation: tokens separated by whitespace runs.

    Lines with zero tokens are dropped and counted in ``dropped``.
    """
    lines: list[tuple[str, ...]] = []
    dropped = 0
    for raw in _split_lines(_decode(path)):
        tokens = tuple(raw.split())
        if tokens:
            lines.append(tokens)
        else:
            dropped += 1
    return GoldSegmentation(tuple(lines), dropped)


def save_text(corpus: TextCorpus, path: str | Path) -> None:
    body = "\n".join(corpus.lines) + "\n" if corpus.lines else ""
    Path(path).write_bytes(body.encode("utf-8"))


def escape_token(token: str) -> str:
    """Replace each whitespace scalar with the two-character sequence ``\\s``."""
    return "".join("\\s" if ch.isspace() else ch for ch in token)


def unescape_token(text: str) -> str:
    return text.replace("\\s", " ")


def save_segmented(token_lines: Iterable[Sequence[str]], path: str | Path) -> None:
    """Write segmentations in gold format: space-separated tokens, one line each.

    Whitespace inside tokens is escaped so the file stays parseable; note the
    escape is lossy for non-space whitespace (everything reads back as U+0020).
    """
    out = []
    for tokens in token_lines:
        out.append(" ".join(escape_token(t) for t in tokens))
    body = "\n".join(out) + "\n" if out else ""
    Path(path).write_bytes(body.encode("utf-8"))


def load_segmented(path: str | Path) -> GoldSegmentation:
    """Read a file produced by :func:`save_segmented`, undoing ``\\s`` escapes."""
    gold = load_gold(path)
    lines = tuple(tuple(unescape_token(t) for t in tokens) for tokens in gold.lines)
    return GoldSegmentation(lines, gold.dropped)


def split_even_odd(corpus: TextCorpus) -> SplitPair:
    """Interleaved halves: even-indexed lines to A, odd-indexed to B."""
    if len(corpus.lines) < 2:
        raise DataError(f"corpus {corpus.source_id!r} has {len(corpus.lines)} lines; need at least 2 to split")
    return SplitPair(
        TextCorpus(corpus.lines[0::2], corpus.source_id + "/even"),
        TextCorpus(corpus.lines[1::2], corpus.source_id + "/odd"),
    )


def sample_indices(n_lines: int, count: int, seed: int) -> tuple[int, ...]:
    """Deterministic sorted sample of ``count`` indices out of ``range(n_lines)``."""
    if count >= n_lines:
        return tuple(range(n_lines))
    return tuple(sorted(random.Random(seed).sample(range(n_lines), count)))


def sample_lines(corpus: TextCorpus, count: int, seed: int) -> TextCorpus:
    """Seeded random sample of ``count`` lines, keeping original relative order."""
    if count < 1:
        raise DataError(f"sample count must be >= 1, got {count}")
    if count >= len(corpus.lines):
        return corpus
    idx = sample_indices(len(corpus.lines), count, seed)
    picked = tuple(corpus.lines[i] for i in idx)
    return TextCorpus(picked, f"{corpus.source_id}/sample{count}s{seed}")
