import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_dist, naive_rank_map
from spaceword.rankfreq import (
    DistMode,
    EmptyDistributionError,
    RankMapError,
    build_dist,
    dist_from_counts,
    dist_from_csv,
    dist_to_csv,
    escape_surface,
    rank_map,
    unescape_surface,
)
from spaceword.tokenizer import Token, TokenKind, tokenize

W, NW = TokenKind.Word, TokenKind.NonWord


def test_word_only_counts():
    d = build_dist(tokenize("a a b"), DistMode.WordOnly)
    assert [(e.surface, e.freq) for e in d.entries] == [("a", 2), ("b", 1)]
    assert d.total_tokens == 3


def test_singleton():
    d = build_dist(tokenize("x"), DistMode.Integrated)
    assert [(e.surface, e.freq) for e in d.entries] == [("x", 1)]
    assert d.total_tokens == 1


def test_empty_after_filter():
    with pytest.raises(EmptyDistributionError):
        build_dist(tokenize(" , "), DistMode.WordOnly)
    with pytest.raises(EmptyDistributionError):
        build_dist([], DistMode.Integrated)


def test_tie_rule_places_space_first():
    # "a a b": a and space tie at 2; " " < "a" so space takes rank 1
    toks = tokenize("a a b")
    integ = build_dist(toks)
    words = build_dist(toks, "word-only")
    assert [(e.surface, e.freq) for e in integ.entries] == [(" ", 2), ("a", 2), ("b", 1)]
    rm = rank_map(integ, words)
    assert rm.n1 == 2
    assert rm.n_of_r.tolist() == [2, 3]
    pairs = [(t.surface, t.kind.value) for t in toks]
    assert naive_rank_map(pairs) == [2, 3]


def test_top_word_above_all_delimiters():
    toks = tokenize("the,the the.cat")
    rm = rank_map(build_dist(toks), build_dist(toks, "word-only"))
    assert rm.n1 == 1
    assert rm.shift[0] == 0


def test_rank_map_mismatch():
    a = build_dist(tokenize("a b"))
    b = build_dist(tokenize("a c"), "word-only")
    with pytest.raises(RankMapError):
        rank_map(a, b)
    c = build_dist(tokenize("a a b"), "word-only")
    with pytest.raises(RankMapError):
        rank_map(a, c)
    with pytest.raises(RankMapError):
        rank_map(c, a)


def test_csv_round_trip():
    d = build_dist(tokenize('He said, "no\tway"\n\\ x'))
    text = dist_to_csv(d)
    assert text.splitlines()[0] == "rank,surface,kind,freq"
    assert "1,\\s,nonword," in text
    assert dist_from_csv(text, DistMode.Integrated) == d


@pytest.mark.parametrize("s, esc", [(" ", "\\s"), ("\n", "\\n"), ("\t", "\\t"), ("\\", "\\\\"),
                                    (" ", "\\u{00a0}"), ("\x07", "\\u{0007}"), ("a,b", "a,b")])
def test_escape(s, esc):
    assert escape_surface(s) == esc
    assert unescape_surface(esc) == s


def test_dist_from_counts_validates():
    with pytest.raises(ValueError):
        dist_from_counts({("a", W): 0})


surfaces = st.lists(st.sampled_from(["a", "b", "c", "the", "x", " ", ",", ".", "\n"]),
                    min_size=1, max_size=50)


def _tokens(surfaces):
    out = []
    for s in surfaces:
        kind = W if s[0].isalnum() else NW
        out.append(Token(s, kind, 0, len(s)))
    return out


@settings(max_examples=300, deadline=None)
@given(surfaces)
def test_matches_naive_reimplementation(raw):
    toks = _tokens(raw)
    pairs = [(t.surface, t.kind.value) for t in toks]
    integ = build_dist(toks)
    assert [(e.surface, e.kind.value, e.freq) for e in integ.entries] == naive_dist(pairs)
    assert integ.total_tokens == len(toks)
    assert np.all(np.diff(integ.freqs) <= 0)
    if any(t.kind is W for t in toks):
        words = build_dist(toks, "word-only")
        assert [(e.surface, e.kind.value, e.freq) for e in words.entries] == naive_dist(pairs, True)
        rm = rank_map(integ, words)
        assert rm.n_of_r.tolist() == naive_rank_map(pairs)
        # monotone, n_r >= r, and n_r - r counts the non-words above n_r
        assert np.all(np.diff(rm.n_of_r) > 0)
        for r, n in enumerate(rm.n_of_r, 1):
            assert n >= r
            above = sum(1 for e in integ.entries[:n - 1] if e.kind is NW)
            assert n - r == above
            # frequency conservation
            assert integ.entries[n - 1].freq == words.entries[r - 1].freq
        assert rm.n1 - 1 == sum(1 for e in integ.entries[:rm.n1 - 1] if e.kind is NW)
