"""Couplings, monotonicity, and concentration of the separable gauge.

Two exact couplings order the separability probabilities across system
sizes: compressing both local factors (bigger systems are more entangled)
and tracing out a qubit pair (which quadruples the effective environment).
The gauge of rho - Id/n concentrates in a window shrinking like 1/sqrt(s),
and its mean is tracked by the trace-zero GUE mean gauge through the
approximation ratio R(n, s) -> 1.
"""

from entanglab import (
    SeededStream,
    concentration_experiment,
    gue_approx_experiment,
    partial_trace_monotonicity,
    projection_monotonicity,
)

print("=== local-compression coupling: (3x3, s) -> (2x2, s) ===")
res = projection_monotonicity(2, 3, 12, 1000, SeededStream(31))
for side in (res.coupled_large, res.coupled_small):
    print(f"  {side.label:14s} dims={side.dims} s={side.s:3d} criterion={side.criterion}"
          f"  p = {side.p_hat:.3f}")
print(f"  small-system probability dominates: {res.ordering_holds()}")

print()
print("=== qubit-pair partial trace: (4x4, s) -> (2x2, 4s) ===")
res = partial_trace_monotonicity(2, 5, 1000, SeededStream(32))
for side in (res.coupled_large, res.coupled_small):
    print(f"  {side.label:14s} dims={side.dims} s={side.s:3d} criterion={side.criterion}"
          f"  p = {side.p_hat:.3f}")
print(f"  reduced-system probability dominates: {res.ordering_holds()}")

print()
print("=== concentration of ||rho - Id/4|| around its mean ===")
summary = concentration_experiment(2, 50, 1500, SeededStream(33), body="s0")
for pt in (summary.at_s, summary.at_4s):
    print(f"  s={pt.s:3d}: mean={pt.mean:.4f}  median={pt.median:.4f}  std={pt.std:.4f}")
print(f"  std ratio = {summary.std_ratio:.3f}  (window shrinks like 1/sqrt(s), so ~2)")

print()
print("=== GUE approximation ratio R(n, s) -> 1 ===")
for n, s in ((8, 64), (16, 256), (32, 1024)):
    r = gue_approx_experiment(n, s, "d0", 200, SeededStream(34))
    print(f"  n={n:3d}, s={s:5d}: R = {r.ratio:.4f} +- {r.stderr:.4f}")
