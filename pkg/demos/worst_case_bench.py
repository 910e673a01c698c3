"""Worst-case timings of the mixture weight and the band quantile.

The strictly increasing counts vector x_j = j + 1 maximizes the work of
the leave-one-out pass; the quantile is timed on a strictly decreasing
triangular plug-in of the same size with 100000 draws.

Run: python demos/worst_case_bench.py
"""

from stackpmf import worst_case_timing

s_grid = (500, 1000, 3000)
timings = worst_case_timing(s_grid, runs=3, mc_reps=100_000, seed=0)

print("s       cv_beta sr   cv_beta sG   loo fast r   loo fast G   quantile")
for s in s_grid:
    t = timings[s]
    print(
        f"{s:<8d}{t['cv_beta_sr']:>9.4f}s {t['cv_beta_sg']:>11.4f}s "
        f"{t['loo_fast_r']:>11.4f}s {t['loo_fast_g']:>11.4f}s {t['quantile']:>9.2f}s"
    )
