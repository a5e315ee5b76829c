"""
Tokenizing text with every delimiter kept
=========================================

"""
from spaceword import TokenizerConfig, tokenize

text = "It's late, and the lamps won't light.\nDon'tcha see?  Café's shut."

# every space, comma and newline is a token of its own
for t in tokenize(text):
    print(f"{t.start:3d}-{t.end:<3d} {t.kind.value:8s} {t.surface!r}")

# the pieces always join back to the input
assert "".join(t.surface for t in tokenize(text)) == text

# runs of the same delimiter can be merged instead
cfg = TokenizerConfig(collapse_runs=True)
print([t.surface for t in tokenize("wait  ...  what", cfg)])
