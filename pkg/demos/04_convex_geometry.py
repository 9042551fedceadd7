"""Convex geometry of the state space, exactly and by Monte Carlo.

Exact log-space formulas: the normalization constant of the induced
density (whose s = n case is the volume of the state body), volume radii,
the Gaussian norm constant gamma_m, and the measure-comparison ratio.
Monte Carlo: Gaussian mean widths from support oracles, the width-duality
product, and the symmetrized-volume inequality for random simplices.
"""

import math

import numpy as np

from entanglab import (
    ProductDims,
    SeededStream,
    SupportOracle,
    density_comparison_ratio,
    gamma_m,
    gaussian_mean_width_mc,
    log_znorm,
    separable_width,
    symmetrization_volume_ratio,
    vrad_states,
    width_duality_check,
)

print("=== exact normalization constants ===")
print(f"  Z(2,2) = {math.exp(log_znorm(2, 2)):.12f}   (pi sqrt2 / 3,  Bloch-ball volume)")
print(f"  Z(2,3) = {math.exp(log_znorm(2, 3)):.12f}   (pi sqrt2 / 30)")
print(f"  log Z(64, 512) = {log_znorm(64, 512):.2f}  (log space: no underflow)")

print()
print("=== volume radius of the state body ===")
for n in (2, 4, 16, 64):
    v = vrad_states(n)
    print(f"  n={n:3d}: vrad = {v:.6f},  vrad * sqrt(n) * e^(1/4) = {v * math.sqrt(n) * math.e ** 0.25:.4f}")

print()
print("=== measure comparison ratio (1 at s = n, bounded on the grid) ===")
for n in (4, 16, 64):
    row = ", ".join(f"s={s}: {density_comparison_ratio(n, s):.4f}" for s in (n, 2 * n, 8 * n))
    print(f"  n={n:3d}: {row}")

print()
print("=== Gaussian mean widths from support oracles ===")
ball = SupportOracle(15, support=lambda u: float(np.linalg.norm(u)))
est = gaussian_mean_width_mc(ball, 4000, SeededStream(21))
print(f"  unit ball in R^15: w_G = {est.value:.4f} +- {est.stderr:.4f}  (gamma_15 = {gamma_m(15):.4f})")
sep = separable_width(ProductDims((2, 2)), 300, SeededStream(22))
print(f"  separable body (2x2): w_G >= {sep.value:.4f} +- {sep.stderr:.4f} (certified lower bound)")

print()
print("=== width duality product (>= gamma_m^2) ===")
res = width_duality_check(ProductDims((2, 2)), 4000, SeededStream(23))
print(f"  w_G(Ssym) * w_G(Ssym polar) = {res.product:.3f} vs gamma^2 = {res.gamma_sq:.3f}"
      f"  -> ratio {res.product / res.gamma_sq:.4f}, passed={res.passed}")

print()
print("=== symmetrized volume of random centered simplices ===")
for m in (2, 3, 4):
    r = symmetrization_volume_ratio(m, 20000, SeededStream(24 + m))
    print(f"  m={m}: vol(-K n K)/vol(K) = {r.ratio:.4f}  (lower bound 2^-{m} = {r.threshold:.4f})")
