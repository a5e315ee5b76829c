"""Lossless word / non-word tokenization.

A word is any maximal run of word characters (Unicode letters, numbers and
marks), optionally holding apostrophes between two word characters.  Every
other character is a delimiter and becomes its own non-word token, so
concatenating the surfaces of the output always reproduces the input.
Contractions inside a word run are split by an ordered rule table, e.g.
``don'tcha -> do | n't | cha``.
"""
from __future__ import annotations

import enum
import re
import sys
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CharClass",
    "TokenKind",
    "Token",
    "ContractionRule",
    "TokenizerConfig",
    "TokenizerEncodingError",
    "classify_char",
    "is_word_surface",
    "tokenize",
    "iter_tokens",
    "decode_utf8",
    "parse_contraction_rules",
    "load_contraction_rules",
    "default_contraction_rules",
]

APOSTROPHES = frozenset({"'", "’"})
_WORD_CATEGORIES = ("L", "N", "M")


class CharClass(enum.Enum):
    WordChar = "word_char"
    Delimiter = "delimiter"


class TokenKind(str, enum.Enum):
    Word = "word"
    NonWord = "nonword"

    def __str__(self) -> str:
        return self.value


class TokenizerEncodingError(ValueError):
    """Input is not valid Unicode; ``offset`` is the first bad byte."""

    def __init__(self, offset: int, reason: str = "invalid UTF-8"):
        super().__init__(f"{reason} at byte offset {offset}")
        self.offset = offset
        self.reason = reason


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    kind: TokenKind
    start: int  # byte offsets into the UTF-8 encoding of the source
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")


@dataclass(frozen=True)
class ContractionRule:
    """One contraction split.

    ``surface`` is either a literal word (``don'tcha``) or a suffix pattern
    with a leading ``*`` standing for any non-empty stem (``*n't``).  The
    ``parts`` must concatenate back to the surface, the stem included as
    ``*``.  Matching ignores case and treats the typographic apostrophe as
    ``'``.
    """

    surface: str
    parts: tuple[str, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts or any(p == "" for p in parts):
            raise ValueError(f"rule {self.surface!r}: empty part")
        if self.wildcard:
            if parts[0] != "*" or "*" in "".join(parts[1:]):
                raise ValueError(f"rule {self.surface!r}: stem '*' must be the first part only")
            literal = "".join(parts[1:])
        else:
            if "*" in "".join(parts):
                raise ValueError(f"rule {self.surface!r}: '*' only allowed in suffix rules")
            literal = "".join(parts)
        if _normalize(literal) != self.literal:
            raise ValueError(
                f"rule {self.surface!r}: parts {'|'.join(parts)!r} do not partition the surface"
            )

    @property
    def wildcard(self) -> bool:
        return self.surface.startswith("*")

    @property
    def literal(self) -> str:
        return _normalize(self.surface[1:] if self.wildcard else self.surface)

    def split(self, word: str) -> list[str] | None:
        """Split ``word`` if this rule matches, else None."""
        lit = self.literal
        n = len(lit)
        if self.wildcard:
            if len(word) <= n or _normalize(word[-n:]) != lit:
                return None
            stem, tail = word[:-n], word[-n:]
            out = [stem]
            lengths = [len(p) for p in self.parts[1:]]
        else:
            if len(word) != n or _normalize(word) != lit:
                return None
            tail = word
            out = []
            lengths = [len(p) for p in self.parts]
        pos = 0
        for ln in lengths:
            out.append(tail[pos:pos + ln])
            pos += ln
        return out


def _normalize(s: str) -> str:
    s = s.replace("’", "'")
    low = s.lower()
    # length-changing case maps would break split offsets
    return low if len(low) == len(s) else s


def parse_contraction_rules(lines: Iterable[str]) -> tuple[ContractionRule, ...]:
    """Parse ``surface<TAB>part|part|...`` lines; ``#`` starts a comment line."""
    rules = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            surface, parts = line.split("\t")
        except ValueError:
            raise ValueError(f"line {lineno}: expected 'surface<TAB>part|part', got {line!r}") from None
        try:
            rules.append(ContractionRule(surface, tuple(parts.split("|"))))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return tuple(rules)


def load_contraction_rules(path: str | Path) -> tuple[ContractionRule, ...]:
    with open(path, encoding="utf-8") as fh:
        return parse_contraction_rules(fh)


@lru_cache(maxsize=1)
def default_contraction_rules() -> tuple[ContractionRule, ...]:
    text = resources.files("spaceword").joinpath("data/contractions.tsv").read_text("utf-8")
    return parse_contraction_rules(text.splitlines())


@dataclass(frozen=True)
class TokenizerConfig:
    """Immutable tokenizer settings.

    ``extra_word_chars`` / ``extra_delimiters`` override the Unicode
    category test for individual characters.  ``collapse_runs`` turns a run
    of one repeated delimiter (e.g. three spaces) into a single token; it is
    off by default so every space is counted.
    """

    contraction_rules: tuple[ContractionRule, ...] = field(default_factory=default_contraction_rules)
    extra_word_chars: frozenset[str] = frozenset()
    extra_delimiters: frozenset[str] = frozenset()
    apostrophes: frozenset[str] = APOSTROPHES
    collapse_runs: bool = False

    def __post_init__(self):
        object.__setattr__(self, "contraction_rules", tuple(self.contraction_rules))
        for name in ("extra_word_chars", "extra_delimiters", "apostrophes"):
            chars = frozenset(getattr(self, name))
            if any(len(c) != 1 for c in chars):
                raise ValueError(f"{name} must hold single characters")
            object.__setattr__(self, name, chars)
        if self.extra_word_chars & self.extra_delimiters:
            raise ValueError("a character cannot be both a word char and a delimiter override")

    def is_word_char(self, c: str) -> bool:
        if c in self.extra_word_chars:
            return True
        if c in self.extra_delimiters:
            return False
        return classify_char(c) is CharClass.WordChar


def classify_char(c: str) -> CharClass:
    """Letters, numbers and combining marks are word characters; everything else delimits."""
    if len(c) != 1:
        raise ValueError(f"expected a single character, got {c!r}")
    if unicodedata.category(c)[0] in _WORD_CATEGORIES:
        return CharClass.WordChar
    return CharClass.Delimiter


@lru_cache(maxsize=1)
def _word_ranges() -> tuple[tuple[int, int], ...]:
    ranges = []
    start = None
    cat = unicodedata.category
    for cp in range(sys.maxunicode + 1):
        if cat(chr(cp))[0] in _WORD_CATEGORIES:
            if start is None:
                start = cp
        elif start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, sys.maxunicode))
    return tuple(ranges)


def _esc(cp: int) -> str:
    return f"\\U{cp:08x}"


@lru_cache(maxsize=32)
def _compile(extra_word: frozenset[str], extra_delim: frozenset[str],
             apostrophes: frozenset[str], collapse: bool) -> re.Pattern:
    cls = "".join(_esc(a) if a == b else f"{_esc(a)}-{_esc(b)}" for a, b in _word_ranges())
    cls += "".join(_esc(ord(c)) for c in sorted(extra_word))
    word = f"[{cls}]"
    if extra_delim:
        excl = "".join(_esc(ord(c)) for c in sorted(extra_delim))
        word = f"(?:(?![{excl}]){word})"
    apos = [a for a in sorted(apostrophes) if a not in extra_word]
    if apos:
        apo = "[" + "".join(_esc(ord(a)) for a in apos) + "]"
        run = f"{word}+(?:{apo}{word}+)*"
    else:
        run = f"{word}+"
    other = r"(.)(?:\2)*" if collapse else "(.)"
    return re.compile(f"({run})|{other}", re.DOTALL)


def is_word_surface(surface: str, config: TokenizerConfig | None = None) -> bool:
    cfg = config or _DEFAULT_CONFIG
    return any(cfg.is_word_char(c) for c in surface)


def _split_contractions(run: str, rules: Sequence[ContractionRule]) -> list[str]:
    for rule in rules:
        parts = rule.split(run)
        if parts is None:
            continue
        if rule.wildcard:
            return _split_contractions(parts[0], rules) + parts[1:]
        return parts
    return [run]


def decode_utf8(data: bytes) -> str:
    """Decode UTF-8, reporting the byte offset of the first invalid sequence."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TokenizerEncodingError(exc.start, exc.reason) from None


def _check_unicode(text: str) -> None:
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as exc:
        offset = len(text[:exc.start].encode("utf-8", "surrogatepass"))
        raise TokenizerEncodingError(offset, "lone surrogate") from None


def iter_tokens(text: str, config: TokenizerConfig | None = None) -> Iterator[Token]:
    cfg = config or _DEFAULT_CONFIG
    _check_unicode(text)
    pattern = _compile(cfg.extra_word_chars, cfg.extra_delimiters, cfg.apostrophes, cfg.collapse_runs)
    rules = cfg.contraction_rules
    # all default rules carry an apostrophe; skip the rule scan for plain runs
    need_apos = bool(rules) and all(any(a in r.surface for a in "'’") for r in rules)
    ascii_text = text.isascii()
    pos = 0
    Word, NonWord = TokenKind.Word, TokenKind.NonWord
    for m in pattern.finditer(text):
        run = m.group(1)
        if run is None:
            s = m.group(0)
            n = len(s) if ascii_text else len(s.encode("utf-8"))
            yield Token(s, NonWord, pos, pos + n)
            pos += n
            continue
        if rules and (not need_apos or "'" in run or "’" in run):
            pieces = _split_contractions(run, rules)
        else:
            pieces = (run,)
        for piece in pieces:
            n = len(piece) if ascii_text else len(piece.encode("utf-8"))
            kind = Word if len(pieces) == 1 or is_word_surface(piece, cfg) else NonWord
            yield Token(piece, kind, pos, pos + n)
            pos += n


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[Token]:
    """Tokenize ``text`` into word and non-word tokens.

    >>> [t.surface for t in tokenize("don'tcha")]
    ['do', "n't", 'cha']
    >>> [(t.surface, t.kind.value) for t in tokenize("a, b")]
    [('a', 'word'), (',', 'nonword'), (' ', 'nonword'), ('b', 'word')]
    """
    return list(iter_tokens(text, config))


_DEFAULT_CONFIG = TokenizerConfig()
