"""Scaled risk n * E[squared l2 loss] against the sample size.

For the empirical estimator the scaled risk has the closed form
1 - sum(p_j^2), which the Monte-Carlo curve should hover around; the
stacked Grenander curve sits below it on decreasing truths.

Run: python demos/risk_curves.py
"""

import os

import numpy as np

from stackpmf import ExperimentConfig, builtin_models, pmf_truncate, run_risk_curve
from stackpmf._svg import linechart_svg

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

name = "M1"
model = builtin_models()[name]
truth = pmf_truncate(model, 1e-12).probs
closed_form = 1.0 - float(np.sum(truth**2))
n_grid = (50, 100, 200, 400, 800, 1600)
codes = ("e", "mm", "G", "sG")

cfg = ExperimentConfig(model=model, reps=400, estimators=codes, n_grid=n_grid, seed=7, workers=2)
res = run_risk_curve(cfg)

print(f"{name}: closed-form scaled risk of the empirical estimator = {closed_form:.4f}\n")
print("n      " + "".join(f"{code:>10s}" for code in codes))
for g, n in enumerate(n_grid):
    print(f"{n:<7d}" + "".join(f"{res.risk_estimates[g, a]:>10.4f}" for a in range(len(codes))))

series = [(code, [float(res.risk_estimates[g, a]) for g in range(len(n_grid))])
          for a, code in enumerate(codes)]
path = os.path.join(OUT, f"risk_{name.lower()}.svg")
with open(path, "w", encoding="utf-8") as fh:
    fh.write(linechart_svg([float(n) for n in n_grid], series))
print(f"\nwrote {path}")
