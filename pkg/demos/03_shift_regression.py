"""
Fitting the rank shift in closed form
=====================================

"""
import numpy as np

from spaceword import fit_at_cutoffs, fit_shift, zm_quotient

r = np.arange(1, 1001)

# noise-free series recover their shift exactly
for k in (-0.85, 0.0, 2.75):
    print(f"true k = {k:6.2f}  fitted k = {fit_shift(zm_quotient(r, k)).k_hat:.10f}")

# with multiplicative noise the estimate drifts with the cutoff
rng = np.random.default_rng(0)
freqs = np.sort(1.0 / (r + 2.0) * np.exp(rng.normal(0, 0.1, r.size)))[::-1]
for fit in fit_at_cutoffs(freqs, [10, 30, 100, 300, 1000]):
    print(f"r_cut = {fit.r_cut:5d}  k = {fit.k_hat:7.3f}  sse = {fit.sse:.3g}")
