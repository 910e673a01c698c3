"""Loss comparison of the six estimators on a decreasing mixture truth.

Reproduces the boxplot-style experiment at desk scale: l1 and l2 losses of
every estimator on the staircase mixture M2 for a small and a moderate
sample size. Writes an SVG boxplot of the l2 losses per sample size.

Run: python demos/loss_boxplots.py
"""

import math
import os

from stackpmf import ExperimentConfig, builtin_models, run_loss_experiment
from stackpmf._svg import boxplot_svg

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

model = builtin_models()["M2"]
codes = ("e", "mm", "r", "G", "sr", "sG")

for n in (20, 300):
    cfg = ExperimentConfig(model=model, reps=500, estimators=codes, norms=(1, 2),
                           n=n, seed=42, workers=2)
    losses = run_loss_experiment(cfg).per_rep_losses
    print(f"\nM2, n={n}, 500 replications, mean loss (se):")
    for b, norm_name in enumerate(("l1", "l2")):
        line = "  ".join(
            f"{code}={losses[:, a, b].mean():.4f}({losses[:, a, b].std(ddof=1) / math.sqrt(500):.4f})"
            for a, code in enumerate(codes)
        )
        print(f"  {norm_name}: {line}")
    groups = [(code, losses[:, a, 1].tolist()) for a, code in enumerate(codes)]
    path = os.path.join(OUT, f"losses_m2_n{n}.svg")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(boxplot_svg(groups))
    print(f"  wrote {path}")
