"""Rank-frequency distributions over words alone or words plus delimiters."""
from __future__ import annotations

import csv
import enum
import io
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .tokenizer import Token, TokenKind

__all__ = [
    "DistMode",
    "Entry",
    "RankFreqDist",
    "RankMap",
    "EmptyDistributionError",
    "RankMapError",
    "build_dist",
    "dist_from_counts",
    "rank_map",
    "escape_surface",
    "unescape_surface",
    "dist_to_csv",
    "dist_from_csv",
    "rank_map_to_csv",
]


class DistMode(str, enum.Enum):
    Integrated = "integrated"
    WordOnly = "word-only"

    def __str__(self) -> str:
        return self.value


class EmptyDistributionError(ValueError):
    pass


class RankMapError(ValueError):
    pass


class Entry(NamedTuple):
    surface: str
    kind: TokenKind
    freq: int


def _order_key(item):
    (surface, kind), freq = item
    return (-freq, surface, kind.value)


@dataclass(frozen=True)
class RankFreqDist:
    """Frequency-ranked token types. Rank ``r`` is ``entries[r - 1]``."""

    mode: DistMode
    entries: tuple[Entry, ...]
    total_tokens: int

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def freqs(self) -> np.ndarray:
        return np.fromiter((e.freq for e in self.entries), dtype=np.int64, count=len(self.entries))

    def rank_of(self, surface: str, kind: TokenKind | None = None) -> int:
        for i, e in enumerate(self.entries):
            if e.surface == surface and (kind is None or e.kind == kind):
                return i + 1
        raise KeyError(surface)


def _make_dist(counts: Mapping[tuple[str, TokenKind], int], mode: DistMode) -> RankFreqDist:
    if mode is DistMode.WordOnly:
        counts = {k: v for k, v in counts.items() if k[1] is TokenKind.Word}
    if not counts:
        raise EmptyDistributionError(f"no rankable tokens in {mode} mode")
    ordered = sorted(counts.items(), key=_order_key)
    entries = tuple(Entry(s, k, int(f)) for (s, k), f in ordered)
    return RankFreqDist(mode, entries, sum(e.freq for e in entries))


def build_dist(tokens: Iterable[Token], mode: DistMode | str = DistMode.Integrated) -> RankFreqDist:
    """Count token types and rank them by frequency, ties by ascending surface.

    >>> from spaceword.tokenizer import tokenize
    >>> [(e.surface, e.freq) for e in build_dist(tokenize("a a b"), "word-only").entries]
    [('a', 2), ('b', 1)]
    """
    mode = DistMode(mode)
    counts = Counter((t.surface, t.kind) for t in tokens)
    return _make_dist(counts, mode)


def dist_from_counts(counts: Mapping[tuple[str, TokenKind], int],
                     mode: DistMode | str = DistMode.Integrated) -> RankFreqDist:
    if any(v <= 0 for v in counts.values()):
        raise ValueError("frequencies must be positive")
    return _make_dist(dict(counts), DistMode(mode))


@dataclass(frozen=True)
class RankMap:
    """Integrated rank ``n_r`` of every word rank ``r`` (both 1-based)."""

    n_of_r: np.ndarray

    @property
    def n1(self) -> int:
        return int(self.n_of_r[0])

    @property
    def shift(self) -> np.ndarray:
        """Non-words ranked above each word, ``n_r - r``."""
        return self.n_of_r - np.arange(1, len(self.n_of_r) + 1)

    def __len__(self) -> int:
        return len(self.n_of_r)


def rank_map(integrated: RankFreqDist, word_only: RankFreqDist) -> RankMap:
    if integrated.mode is not DistMode.Integrated or word_only.mode is not DistMode.WordOnly:
        raise RankMapError("rank_map expects (integrated, word-only) distributions")
    index = {(e.surface, e.kind): (n, e.freq) for n, e in enumerate(integrated.entries, 1)}
    n_of_r = np.empty(len(word_only), dtype=np.int64)
    for r, e in enumerate(word_only.entries):
        try:
            n, freq = index[(e.surface, e.kind)]
        except KeyError:
            raise RankMapError(f"word {e.surface!r} missing from integrated distribution") from None
        if freq != e.freq:
            raise RankMapError(f"word {e.surface!r}: frequency {e.freq} != integrated {freq}")
        n_of_r[r] = n
    if np.any(np.diff(n_of_r) <= 0):
        raise RankMapError("distributions were not built from the same tokens")
    return RankMap(n_of_r)


_ESCAPES = {"\\": "\\\\", " ": "\\s", "\n": "\\n", "\t": "\\t", "\r": "\\r"}
_UNESCAPE = re.compile(r"\\(?:u\{([0-9a-fA-F]+)\}|(.))", re.DOTALL)
_SIMPLE = {"\\": "\\", "s": " ", "n": "\n", "t": "\t", "r": "\r"}


def escape_surface(surface: str) -> str:
    """Make whitespace and control characters visible: ``" " -> "\\s"``."""
    out = []
    for c in surface:
        if c in _ESCAPES:
            out.append(_ESCAPES[c])
        elif unicodedata.category(c) in ("Cc", "Cf", "Cs", "Zs", "Zl", "Zp"):
            out.append(f"\\u{{{ord(c):04x}}}")
        else:
            out.append(c)
    return "".join(out)


def unescape_surface(text: str) -> str:
    def sub(m):
        if m.group(1) is not None:
            return chr(int(m.group(1), 16))
        try:
            return _SIMPLE[m.group(2)]
        except KeyError:
            raise ValueError(f"unknown escape \\{m.group(2)} in {text!r}") from None
    return _UNESCAPE.sub(sub, text)


def dist_to_csv(dist: RankFreqDist) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "surface", "kind", "freq"])
    for r, e in enumerate(dist.entries, 1):
        w.writerow([r, escape_surface(e.surface), e.kind.value, e.freq])
    return buf.getvalue()


def dist_from_csv(text: str, mode: DistMode | str | None = None) -> RankFreqDist:
    """Read a distribution written by :func:`dist_to_csv`."""
    rows = list(csv.DictReader(io.StringIO(text)))
    counts = {(unescape_surface(r["surface"]), TokenKind(r["kind"])): int(r["freq"]) for r in rows}
    if mode is None:
        kinds = {k for _, k in counts}
        mode = DistMode.WordOnly if kinds == {TokenKind.Word} else DistMode.Integrated
    return dist_from_counts(counts, mode)


def rank_map_to_csv(rmap: RankMap, word_only: RankFreqDist) -> str:
    """Rows ``r,n_r,surface,freq``: the rank translation of every word."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "n_r", "surface", "freq"])
    for r, (n, e) in enumerate(zip(rmap.n_of_r, word_only.entries), 1):
        w.writerow([r, int(n), escape_surface(e.surface), e.freq])
    return buf.getvalue()
