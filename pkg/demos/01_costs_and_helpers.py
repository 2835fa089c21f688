#!/usr/bin/env python3
"""Tour of the cost library: the smooth ramp, the nonsmooth max
structure, the parametric quadratic families, and the instance catalog.

Every adversarial instance exposes the same interface: a value oracle,
a subgradient oracle with frozen tie-breaking, regularity constants,
and (when the construction provides one) the exact optimum.
"""

import json

import numpy as np

import reprolab as rl

print("=" * 72)
print("1. the smooth ramp: 0 | x^2 | 2x-1, continuously differentiable")
print("=" * 72)
for x in (-1.0, 0.0, 0.25, 0.5, 1.0, 2.0):
    v, d = rl.eval_helper_F(x)
    print(f"  ramp({x:+.2f}) = {v:.4f}   ramp'({x:+.2f}) = {d:.4f}")

print()
print("=" * 72)
print("2. the max structure over (err, y, z) blocks")
print("   subgradient = first branch achieving the max; sign(0) = +1")
print("=" * 72)
cases = [
    (np.array([0.5, 0.0]), "positive first coordinate -> y branch of i=1"),
    (np.array([-0.5, 0.0]), "negative first coordinate -> z branch of i=1"),
    (np.zeros(2), "all zero -> the outer constant wins the tie"),
]
for x, story in cases:
    val, (gx, gy, gz) = rl.eval_helper_G(x, np.zeros(2), np.zeros(2))
    print(f"  err={x}  value={val:+.2f}   d/derr={gx}  d/dy={gy}  d/dz={gz}")
    print(f"    ({story})")

print()
print("=" * 72)
print("3. a location family of quadratics (used by the sampling oracles)")
print("=" * 72)
fam = rl.ThetaFamily(theta=0.0, epsilon=0.01, variant="interval-quadratic")
print(f"  interior value f(0.1)  = {fam.value(0.1):.4f}  (= 100*eps*x^2)")
print(f"  linear extension f(2)  = {fam.value(2.0):.4f}  (slope frozen at the edge)")
print(f"  curvature              = {fam.curvature:.4f}  (= 200*eps everywhere inside)")

print()
print("=" * 72)
print("4. the instance catalog (what the CLI `list` subcommand prints)")
print("=" * 72)
for entry in rl.catalog():
    print(f"  {entry['scenario_id']:24s} dim={entry['dim_formula']:18s} "
          f"requires {entry['required_params']}")

print()
print("every instance bundles a matched error oracle and the first-order")
print("configuration whose guarantees the harness verifies, e.g.:")
inst = rl.build_instance("smooth_sto_lb", {"epsilon": 0.05, "T": 8, "delta": 1.0})
print(f"  smooth_sto_lb: dim {inst.cost.dim}, value at start "
      f"{inst.cost.value(inst.init):.3f}, oracle {inst.oracle.kind} / "
      f"{inst.oracle.schedule.kind}, step rule {inst.solver.schedule.kind}, "
      f"averaging {inst.solver.averaging.kind}")
