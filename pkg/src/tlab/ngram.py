"""Direction-indexed character n-gram transition count models."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .corpus import DataError, TextCorpus

FORMAT_HEADER = "tlab-model v1"

_DIRECTIONS = ("forward", "backward")
_NEEDS_ESCAPE = ("\t", "\n", "\r")
_HEADER_RE = re.compile(r"^tlab-model v1 n_max=(\d+)$")


class ModelFormatError(DataError):
    """Model file is malformed or carries an unsupported format version."""


# edge tables: order -> gram -> continuation character -> count
EdgeTable = dict[int, dict[str, dict[str, int]]]


@dataclass
class TransitionModel:
    """Counts of (n-gram, adjacent character) incidences in both directions.

    ``forward[n][gram][ch]`` counts occurrences of ``gram`` immediately
    followed by ``ch``; ``backward[n][gram][ch]`` counts ``gram`` immediately
    preceded by ``ch``. Treat instances as immutable once built.

    ``trained_chars`` is weighted bookkeeping only and is excluded from
    equality, as is the lazy per-order max-out-degree cache.
    """

    n_max: int
    forward: EdgeTable
    backward: EdgeTable
    trained_chars: int = field(default=0, compare=False)
    _max_freedom: dict[tuple[int, str], int] = field(
        default_factory=dict, init=False, compare=False, repr=False
    )

    def table(self, direction: str) -> EdgeTable:
        if direction == "forward":
            return self.forward
        if direction == "backward":
            return self.backward
        raise ValueError(f"unknown direction {direction!r}")


def build_model(
    corpus: TextCorpus, n_max: int, line_weights: Sequence[int] | None = None
) -> TransitionModel:
    """Count every in-line window of n characters plus one adjacent character.

    Windows never cross line boundaries and whitespace is an ordinary
    character. Each incidence adds the line's weight (default 1).
    """
    if n_max < 1:
        raise DataError(f"n_max must be >= 1, got {n_max}")
    if line_weights is not None:
        if len(line_weights) != len(corpus.lines):
            raise DataError(
                f"{len(line_weights)} weights for {len(corpus.lines)} lines"
            )
        if any(w < 1 for w in line_weights):
            raise DataError("line weights must be positive integers")

    forward: EdgeTable = {n: {} for n in range(1, n_max + 1)}
    backward: EdgeTable = {n: {} for n in range(1, n_max + 1)}
    trained = 0
    weights = line_weights if line_weights is not None else (1,) * len(corpus.lines)
    for line, w in zip(corpus.lines, weights):
        length = len(line)
        trained += w * length
        for n in range(1, min(n_max, length - 1) + 1):
            fwd_n = forward[n]
            bwd_n = backward[n]
            for i in range(n, length):
                gram = line[i - n : i]
                edges = fwd_n.get(gram)
                if edges is None:
                    edges = fwd_n[gram] = {}
                ch = line[i]
                edges[ch] = edges.get(ch, 0) + w
                gram = line[i - n + 1 : i + 1]
                edges = bwd_n.get(gram)
                if edges is None:
                    edges = bwd_n[gram] = {}
                ch = line[i - n]
                edges[ch] = edges.get(ch, 0) + w
    return TransitionModel(n_max, forward, backward, trained)


def prune(model: TransitionModel, min_count: int) -> TransitionModel:
    """Drop every edge with count < ``min_count`` and any gram left edgeless.

    ``min_count`` of 0 returns the input model unchanged.
    """
    if min_count < 0:
        raise DataError(f"prune threshold must be >= 0, got {min_count}")
    if min_count == 0:
        return model
    forward: EdgeTable = {}
    backward: EdgeTable = {}
    for src, dst in ((model.forward, forward), (model.backward, backward)):
        for n, grams in src.items():
            kept_n: dict[str, dict[str, int]] = {}
            for gram, edges in grams.items():
                kept = {ch: c for ch, c in edges.items() if c >= min_count}
                if kept:
                    kept_n[gram] = kept
            dst[n] = kept_n
    return TransitionModel(model.n_max, forward, backward, model.trained_chars)


def freedom(model: TransitionModel, gram: str, direction: str) -> int:
    """Out-degree of ``gram``: how many distinct characters continue it."""
    n = len(gram)
    if n < 1 or n > model.n_max:
        raise DataError(f"gram order {n} outside model range 1..{model.n_max}")
    edges = model.table(direction)[n].get(gram)
    return len(edges) if edges else 0


def max_freedom(model: TransitionModel, n: int, direction: str) -> int:
    """Largest out-degree over all grams of order ``n``; 0 for an empty order."""
    if n < 1 or n > model.n_max:
        raise DataError(f"order {n} outside model range 1..{model.n_max}")
    key = (n, direction)
    cached = model._max_freedom.get(key)
    if cached is None:
        grams = model.table(direction)[n]
        cached = max((len(edges) for edges in grams.values()), default=0)
        model._max_freedom[key] = cached
    return cached


def _escape(text: str) -> str:
    if any(c in text for c in _NEEDS_ESCAPE):
        return "x" + text.encode("utf-8").hex()
    return text


def _unescape(fieldtext: str) -> str:
    # inverse of _escape: only fields whose decoded form contains a
    # tab/LF/CR can have been escaped, everything else is literal
    if fieldtext.startswith("x") and len(fieldtext) > 1:
        hexpart = fieldtext[1:]
        if len(hexpart) % 2 == 0:
            try:
                decoded = bytes.fromhex(hexpart).decode("utf-8")
            except ValueError:
                return fieldtext
            if any(c in decoded for c in _NEEDS_ESCAPE):
                return decoded
    return fieldtext


def _iter_records(model: TransitionModel) -> Iterator[tuple[str, int, str, str, int]]:
    for tag, table in (("b", model.backward), ("f", model.forward)):
        for n in sorted(table):
            grams = table[n]
            for gram in sorted(grams):
                edges = grams[gram]
                for ch in sorted(edges):
                    yield tag, n, gram, ch, edges[ch]


def save_model(model: TransitionModel, path: str | Path) -> None:
    """Write the canonical sorted text form; identical models save byte-identically."""
    out = [f"{FORMAT_HEADER} n_max={model.n_max}"]
    for tag, n, gram, ch, count in _iter_records(model):
        out.append(f"{tag}\t{n}\t{_escape(gram)}\t{_escape(ch)}\t{count}")
    Path(path).write_bytes(("\n".join(out) + "\n").encode("utf-8"))


def load_model(path: str | Path) -> TransitionModel:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ModelFormatError(f"{path}: empty model file")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise ModelFormatError(f"{path}: bad header {lines[0]!r}; expected '{FORMAT_HEADER} n_max=<k>'")
    n_max = int(header.group(1))
    if n_max < 1:
        raise ModelFormatError(f"{path}: n_max must be >= 1")
    forward: EdgeTable = {n: {} for n in range(1, n_max + 1)}
    backward: EdgeTable = {n: {} for n in range(1, n_max + 1)}
    for lineno, record in enumerate(lines[1:], start=2):
        parts = record.split("\t")
        if len(parts) != 5:
            raise ModelFormatError(f"{path}:{lineno}: expected 5 tab-separated fields, got {len(parts)}")
        tag, n_text, gram_text, ch_text, count_text = parts
        if tag == "f":
            table = forward
        elif tag == "b":
            table = backward
        else:
            raise ModelFormatError(f"{path}:{lineno}: unknown direction tag {tag!r}")
        try:
            n = int(n_text)
            count = int(count_text)
        except ValueError as exc:
            raise ModelFormatError(f"{path}:{lineno}: non-integer field") from exc
        if n < 1 or n > n_max:
            raise ModelFormatError(f"{path}:{lineno}: order {n} outside 1..{n_max}")
        if count < 1:
            raise ModelFormatError(f"{path}:{lineno}: count must be positive")
        gram = _unescape(gram_text)
        ch = _unescape(ch_text)
        if len(gram) != n or len(ch) != 1:
            raise ModelFormatError(f"{path}:{lineno}: field lengths disagree with order")
        table[n].setdefault(gram, {})[ch] = count
    return TransitionModel(n_max, forward, backward, 0)
