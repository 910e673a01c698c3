"""Global confidence band around a stacked Grenander fit.

Draws one sample from the geometric truth, fits the stacked estimator,
estimates the sup-norm quantile of the Gaussian limit by Monte Carlo with
the fit plugged in, and prints the band next to the truth it should cover.

Run: python demos/confidence_band.py
"""

import numpy as np

from stackpmf import GRENANDER, builtin_models, confidence_band, pmf_truncate, sample, stacked

model = builtin_models()["M4"]
truth = pmf_truncate(model, 1e-12).probs
n = 500

x = sample(model, n, seed=2024)
fit = stacked(x, GRENANDER)
cb = confidence_band(fit.estimate, n, alpha=0.05, mc_reps=100_000, seed=2024)

print(f"geometric truth, n={n}, beta_hat={fit.beta_hat:.4f}, q_hat={cb.q_hat:.4f}\n")
print(" j   truth    estimate  lower    upper    inside")
covered = True
for j in range(truth.size):
    est = fit.estimate.probs[j] if j < len(fit.estimate) else 0.0
    lower = cb.lower[j] if j < len(cb.lower) else 0.0
    upper = cb.upper[j] if j < len(cb.upper) else cb.q_hat / np.sqrt(n)
    inside = lower <= truth[j] <= upper
    covered &= inside
    print(f"{j:2d}   {truth[j]:.5f}  {est:.5f}   {lower:.5f}  {upper:.5f}  {'yes' if inside else 'NO'}")
print(f"\nwhole truth inside the band: {'yes' if covered else 'no'}")
