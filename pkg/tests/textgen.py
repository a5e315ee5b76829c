"""Deterministic test texts."""
import importlib
import inspect

import numpy as np

VOCAB = (
    "the of and to a in that he was it his I with as had for you at on not be her "
    "is said him but she my all they which from have so by were this me there "
    "one or no what would been when an their if we could them up out more will "
    "into then very some little man time upon who like do your than any about "
    "over only now said night Mr Hale Marsh Madame Lyon Bristol old great hand "
    "house before again door once know came down made such come much way should "
    "don't it's I'm they'll we've she'd won't can't you're isn't shouldn't've "
    "café naïve résumé Zoë façade coöperate déjà vu 1775 42 o'clock O'Brien "
    "prisoner wine street dark light head eyes face being long looked saw"
).split()

PUNCT = [",", ",", ",", ".", ".", ";", ":", "!", "?", "—", "-"]


def synthetic_novel(n_chars=800_000, seed=0):
    """Zipf-sampled pseudo-English with punctuation, quotes, contractions and paragraphs."""
    rng = np.random.default_rng(seed)
    p = 1.0 / np.arange(1, len(VOCAB) + 1)
    p /= p.sum()
    parts = []
    size = 0
    while size < n_chars:
        words = rng.choice(len(VOCAB), size=rng.integers(5, 25), p=p)
        sent = []
        for w in words:
            sent.append(VOCAB[w])
            if rng.random() < 0.12:
                sent.append(PUNCT[rng.integers(len(PUNCT))])
            sent.append("  " if rng.random() < 0.01 else " ")
        s = "".join(sent).strip()
        if rng.random() < 0.2:
            s = "“" + s + ",” he said."
        elif rng.random() < 0.1:
            s = "'" + s + "'"
        else:
            s += "."
        s += "\n\n" if rng.random() < 0.1 else ("\t" if rng.random() < 0.01 else " ")
        parts.append(s)
        size += len(s)
    return "".join(parts)


_DOC_MODULES = (
    "argparse asyncio base64 bisect calendar collections configparser contextlib copy csv "
    "dataclasses datetime decimal difflib doctest email enum fractions functools gettext heapq "
    "http.client imaplib inspect itertools json locale logging mailbox multiprocessing optparse "
    "pathlib pickle pydoc random re shutil smtplib socket sqlite3 ssl statistics string "
    "subprocess tarfile tempfile textwrap threading typing unittest urllib.request zipfile "
    "ftplib poplib codecs"
).split()


def english_prose():
    """Several hundred kilobytes of real English: standard-library docstrings."""
    seen = set()
    docs = []

    def walk(obj, depth=0):
        if id(obj) in seen or depth > 3:
            return
        seen.add(id(obj))
        d = inspect.getdoc(obj)
        if d:
            docs.append(d)
        if inspect.ismodule(obj) or inspect.isclass(obj):
            for name in sorted(vars(obj)):
                if name.startswith("_"):
                    continue
                v = getattr(vars(obj)[name], "__func__", vars(obj)[name])
                if inspect.isclass(v) or inspect.isfunction(v):
                    walk(v, depth + 1)

    for m in _DOC_MODULES:
        walk(importlib.import_module(m))
    return "\n\n".join(docs)


def random_unicode_strings(n, seed=0, max_len=40):
    """Random strings over a mix of ASCII, accents, combining marks, CJK, emoji and apostrophes."""
    rng = np.random.default_rng(seed)
    pools = [
        "abcdefghijklmnopqrstuvwxyzABCXYZ0123456789",
        " \t\n\r,.;:!?-—()[]\"“”«»_/\\@#$%&*",
        "''’’",
        "éèüñçøßÆœ",
        "̧́̈",
        "漢字かなカナ한글",
        "😀🎉​ ﻿",
    ]
    out = []
    for _ in range(n):
        k = int(rng.integers(0, max_len + 1))
        chars = []
        for _ in range(k):
            if rng.random() < 0.05:
                cp = int(rng.integers(0x20, 0x30000))
                if 0xD800 <= cp <= 0xDFFF:
                    cp = 0x41
                chars.append(chr(cp))
            else:
                pool = pools[int(rng.integers(len(pools)))]
                chars.append(pool[int(rng.integers(len(pool)))])
        out.append("".join(chars))
    return out


def _word(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(97 + r) + s
    return s


def simon_text(alpha=0.1, n_words=5000, seed=0, gutenberg=True, punct=0.1):
    """Words from the Simon process joined by spaces; ``punct`` sets the delimiter density."""
    from spaceword.simon import SimonConfig, simulate

    rng = np.random.default_rng(seed)
    run = simulate(SimonConfig(alpha, n_words, seed))
    ids = np.repeat(np.arange(run.N), run.freqs)
    rng.shuffle(ids)
    out = []
    for i, w in enumerate(ids):
        out.append(_word(int(w)))
        u = rng.random()
        out.append(", " if u < 0.6 * punct else ". " if u < punct else "\n" if u < 1.1 * punct else " ")
    body = "".join(out)
    if not gutenberg:
        return body
    return ("The Project Gutenberg eBook of Test\n\n*** START OF THE PROJECT GUTENBERG EBOOK TEST ***\n"
            + body + "\n*** END OF THE PROJECT GUTENBERG EBOOK TEST ***\nLicense text here.\n")


def write_corpus(dirpath, n, missing=(), seed0=0):
    """n synthetic texts plus a manifest; ids in ``missing`` point at absent files."""
    dirpath.mkdir(parents=True, exist_ok=True)
    lines = ["text_id,path,language"]
    for i in range(n):
        tid = f"pg{i:03d}"
        if tid in missing:
            lines.append(f"{tid},nope/{tid}.txt,en")
            continue
        alpha = 0.05 + 0.02 * (i % 7)
        (dirpath / f"{tid}.txt").write_text(
            simon_text(alpha, 3000 + 500 * (i % 5), seed0 + i, punct=(0.02, 0.3, 0.6, 0.9)[i % 4]), encoding="utf-8")
        lines.append(f"{tid},{tid}.txt,en")
    (dirpath / "manifest.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return dirpath / "manifest.csv"
