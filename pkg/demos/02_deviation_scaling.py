#!/usr/bin/env python3
"""How reproducible is slowed-down SGD, and how does that scale?

Two independent runs of the same method on the same cost differ because
the gradient oracle injects bounded noise.  This demo measures the mean
squared distance between paired outputs across a grid of iteration
counts and fits the log-log slope, which should track the expected
exponent for the instance's (function class, error model) cell.

Uses a reduced grid so it finishes in a few seconds; the acceptance
suite runs the full-size version.
"""

import reprolab as rl
from reprolab.lab import EXPECTED_SLOPES, fit_scaling, sweep

EPS, DELTA, SEED = 0.05, 1.0, 20260810

print("smooth cost + per-iteration coordinate noise, slowed SGD (step 1/(eps*T))")
print(f"eps = {EPS}, delta = {DELTA}, 16 trial pairs per row\n")

table = sweep(
    "smooth_sto_lb", {"epsilon": EPS, "delta": DELTA},
    {"T": [64, 128, 256, 512]},
    trials=16, pairing="independent", master_seed=SEED,
)

print(f"{'T':>6} {'mean sq deviation':>20} {'stderr':>10} "
      f"{'mean subopt':>12} {'<= eps?':>8}")
for row in table.rows:
    print(f"{int(row.params['T']):6d} {row.deviation.mean_sq_dev:20.6f} "
          f"{row.deviation.stderr:10.6f} {row.subopt_mean:12.6f} "
          f"{str(not row.accuracy_failed):>8}")

fit = fit_scaling(table, "T")
print(f"\nlog-log slope vs T: {fit.slope:+.4f}   "
      f"expected {fit.expected_slope:+.1f}   r^2 = {fit.r_squared:.5f}")
print(f"(closed form for this instance: 2*delta^2/(3*eps^2*T) "
      f"= {2 * DELTA**2 / (3 * EPS**2 * 64):.4f} at T=64)")

print("\nexpected-slope table (per function class / error model cell):")
for cell, slopes in EXPECTED_SLOPES.items():
    print(f"  {cell:28s} {slopes}")
