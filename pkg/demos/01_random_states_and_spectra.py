"""Random matrices and random states: sampling, spectra, and the semicircle.

Draws trace-zero GUE matrices and induced states, rescales their spectra,
and watches the empirical spectral distribution approach the semicircle law
in the infinity-Wasserstein distance. Also prints the two-sided
majorization factors (alpha, beta) whose product is always >= 1.
"""

import math

import numpy as np

from entanglab import (
    SeededStream,
    alpha_beta,
    dinf_semicircle,
    sample_gue0,
    sample_induced_state,
    trial_generators,
)

print("=== trace-zero GUE: spec(G/sqrt(n)) vs the semicircle ===")
for n in (32, 128, 512):
    dists = []
    for rng in trial_generators(SeededStream(1), 10):
        lam = np.linalg.eigvalsh(sample_gue0(n, rng)) / math.sqrt(n)
        dists.append(dinf_semicircle(lam))
    print(f"  n={n:4d}: median d_inf = {np.median(dists):.4f}")

print()
print("=== induced states: spec(sqrt(ns)(rho - Id/n)) vs the semicircle ===")
n = 64
for s in (1024, 8192, 65536):
    dists = []
    for rng in trial_generators(SeededStream(2), 5):
        rho = sample_induced_state(n, s, rng)
        lam = np.linalg.eigvalsh(rho.centered()) * math.sqrt(n * s)
        dists.append(dinf_semicircle(lam))
    print(f"  n={n}, s={s:6d} (s/n={s//n:5d}): median d_inf = {np.median(dists):.4f}")
print("  (both n and s/n must grow for the distance to vanish)")

print()
print("=== majorization factors of single draws ===")
for n in (16, 64, 256):
    lam = np.linalg.eigvalsh(sample_gue0(n, SeededStream(3))) / math.sqrt(n)
    a, b = alpha_beta(lam)
    print(f"  n={n:4d}: alpha={a:.4f}  beta={b:.4f}  alpha*beta={a * b:.4f} (>= 1)")
