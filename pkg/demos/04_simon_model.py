"""
Simon's model against its analytic law
======================================

"""
import numpy as np

from spaceword import SimonConfig, run_vs_analytic, simulate

alpha = 0.05
run = simulate(SimonConfig(alpha, 1_000_000, seed=1))
print(f"{run.N} distinct words, mean innovation gap {run.gaps.mean():.2f} (1/alpha = {1 / alpha:g})")

report = run_vs_analytic(run, 1 - alpha)
print("rank  observed  predicted")
for i in (0, 1, 2, 9, 99):
    print(f"{i + 1:4d}  {report.observed[i]:8.1f}  {report.predicted[i]:9.1f}")
print(f"mean log error, ranks 2-100: {report.mean_log_rel_error(2, 100):.3f}")
print(f"first-mover ratio: {report.first_mover_ratio:.1f} vs {report.predicted_first_mover_ratio:.1f}")

# a single run scatters widely around the first-mover prediction
ratios = [run_vs_analytic(simulate(SimonConfig(alpha, 1_000_000, seed=s)), 1 - alpha).first_mover_ratio
          for s in range(10)]
print("ratios over 10 seeds:", np.round(ratios, 1), "mean", round(float(np.mean(ratios)), 1))
