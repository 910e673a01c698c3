"""Fit all five estimators to one small frequency vector and compare them.

The data are counts of observed values 0, 1, 2, ...; the stacked fits
report the data-driven mixture weight beta_hat together with the quadratic
coefficients it was derived from.

Run: python demos/fit_estimators.py
"""

import numpy as np

from stackpmf import (
    GRENANDER,
    REARRANGEMENT,
    FrequencyData,
    empirical,
    grenander,
    minimax,
    rearrangement,
    stacked,
)

counts = np.array([5, 9, 2, 4, 1, 1])
x = FrequencyData(counts)
print(f"counts            {counts.tolist()}  (n = {x.n})")
print(f"empirical         {np.round(empirical(x).probs, 4).tolist()}")
print(f"minimax           {np.round(minimax(x).probs, 4).tolist()}")
print(f"rearrangement     {np.round(rearrangement(x).probs, 4).tolist()}")
print(f"grenander         {np.round(grenander(x).probs, 4).tolist()}")

for kind in (REARRANGEMENT, GRENANDER):
    fit = stacked(x, kind)
    print(
        f"stacked {kind:13s} {np.round(fit.estimate.probs, 4).tolist()}  "
        f"beta_hat={fit.beta_hat:.4f} (a_n={fit.a_n:.5f}, b_n={fit.b_n:.5f})"
    )
