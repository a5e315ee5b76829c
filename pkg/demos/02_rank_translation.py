"""
Where words land once delimiters are ranked too
===============================================

"""
import importlib
import inspect

from spaceword import DistMode, build_dist, rank_map, tokenize

# any long English text will do; standard-library docstrings are always at hand
docs = []
for name in ("argparse", "collections", "csv", "email", "logging", "pathlib", "random",
             "statistics", "subprocess", "typing", "unittest", "zipfile"):
    mod = importlib.import_module(name)
    for obj in [mod] + [getattr(mod, a) for a in dir(mod)]:
        docs.append(inspect.getdoc(obj) or "")
text = "\n\n".join(dict.fromkeys(docs))
print(f"{len(text):,} characters")

toks = tokenize(text)
integrated = build_dist(toks, DistMode.Integrated)
words = build_dist(toks, DistMode.WordOnly)
rmap = rank_map(integrated, words)

print("top of the integrated ranking:")
for n, e in enumerate(integrated.entries[:8], 1):
    print(f"  n={n:<3d} {e.freq:7d} {e.kind.value:8s} {e.surface!r}")

print(f"\nthe top word sits at integrated rank n1 = {rmap.n1}")
print("word rank r -> integrated rank n_r:")
for r in (1, 2, 3, 5, 10, 100):
    if r <= len(rmap.n_of_r):
        print(f"  {r:4d} -> {rmap.n_of_r[r - 1]}")
