"""The separability threshold: entangled for small environments, separable
for large ones.

Scans the environment dimension s and records how often a random induced
state on C^d x C^d passes the chosen criterion. At d=2 the exact criterion
is available and the transition happens around s ~ 5-8; for d=3 the PPT
probability crosses 1/2 near s ~ 21, on its way to the 4 d^2 = 36 scaling.
The Gaussian mean-gauge estimate of the threshold is printed alongside.
"""

from entanglab import (
    ExperimentConfig,
    SeededStream,
    ppt_threshold_estimate,
    separability_threshold_estimate,
    threshold_scan,
)


def show(res):
    print(f"  criterion={res.criterion}  dims={res.dims}")
    for p in res.points:
        bar = "#" * int(round(40 * p.p_hat))
        print(f"   s={p.s:3d}  p={p.p_hat:6.3f}  |{bar}")
    print(f"  estimated p=1/2 crossing: {res.crossing}")


print("=== exact separability scan on two qubits ===")
cfg = ExperimentConfig.from_dict({
    "experiment": "threshold-scan",
    "dims": [2, 2],
    "s_values": [1, 2, 4, 6, 8, 12, 16, 24, 32],
    "criterion": "exact",
    "trials": 1000,
    "master_seed": 11,
})
show(threshold_scan(cfg))

print()
print("=== PPT scan on two qutrits ===")
cfg = ExperimentConfig.from_dict({
    "experiment": "threshold-scan",
    "dims": [3, 3],
    "s_values": {"start": 12, "stop": 44, "step": 4},
    "criterion": "ppt",
    "trials": 1000,
    "master_seed": 12,
})
show(threshold_scan(cfg))

print()
print("=== threshold estimates from the Gaussian mean gauge ===")
est = separability_threshold_estimate(2, 4000, SeededStream(13))
print(f"  separable body, d=2: s0 ~ {est.mean:.3f} +- {est.stderr:.3f}")
for d in (2, 4, 8):
    res = ppt_threshold_estimate(d, 400, SeededStream(14))
    print(f"  PPT body, d={d}: s0_ppt ~ {res.threshold.mean:7.2f}  (4 d^2 = {4 * d * d}),"
          f"  polar width ~ {res.width_polar.mean:.3f}  (2 d = {2 * d})")
