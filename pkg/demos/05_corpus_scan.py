"""
A small corpus run, end to end
==============================

Builds a throwaway corpus of generated texts, runs the pipeline and reads the
correlation scan back. Pass ``--manifest path.csv`` to use real texts instead.
"""
import argparse
import tempfile
from pathlib import Path

import numpy as np

from spaceword import load_manifest, log_spaced_cutoffs, run_corpus

parser = argparse.ArgumentParser()
parser.add_argument("--manifest")
parser.add_argument("--out", default=None)
args = parser.parse_args()

work = Path(tempfile.mkdtemp(prefix="spaceword-"))
if args.manifest:
    manifest_path = Path(args.manifest)
else:
    rng = np.random.default_rng(0)
    ranks = np.arange(1, 5001)
    rows = ["text_id,path"]
    for i in range(30):
        # a larger shift flattens the top words, letting more delimiters outrank them
        k = rng.uniform(0, 12)
        p = 1.0 / (ranks + k)
        ids = rng.choice(ranks.size, size=30_000, p=p / p.sum())
        seps = rng.choice([" ", ", ", ". ", "; ", "\n"], size=ids.size, p=[0.84, 0.08, 0.05, 0.02, 0.01])
        body = "".join(f"w{w}{s}" for w, s in zip(ids, seps))
        (work / f"t{i:02d}.txt").write_text(body, encoding="utf-8")
        rows.append(f"t{i:02d},t{i:02d}.txt")
    manifest_path = work / "manifest.csv"
    manifest_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

out = Path(args.out) if args.out else work / "out"
run = run_corpus(load_manifest(manifest_path), out, cutoffs=log_spaced_cutoffs(2, 10_000, 100))
print(run.summary())
print("outputs in", out)

res = run.scan
for c in (10, 50, 100, 500, 1000):
    i = int(np.searchsorted(res.cutoffs, c))
    if i < len(res.cutoffs):
        print(f"r_cut {res.cutoffs[i]:5d}: rho = {res.rho[i]:.3f}  median k_s = {res.ks_median[i]:.3f}")
