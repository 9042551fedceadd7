"""Monte-Carlo mean widths, the width-duality lower bound, the
symmetrized-volume check, and the separability/PPT threshold estimates.

Gaussian mean width of a body K is w_G(K) = E h_K(G) for a standard Gaussian
direction G in the ambient space; dividing by the Gaussian norm constant
gamma_m gives the spherical mean width. For bodies of traceless self-adjoint
matrices the standard Gaussian direction is exactly a trace-zero GUE draw.

Widths of the separable body are reported as certified lower bounds: the
product-state maximization that evaluates its support function is a
heuristic that can stop below the optimum, never above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ensembles import sample_gue0
from .geometry import gamma_m
from .linalg import ProductDims
from .rng import trial_generators
from .separability import (
    UnsupportedDimensionError,
    gauge_ppt,
    mean_gauge_gue,
    support_separable,
)
from .stats import Estimate, from_samples

__all__ = [
    "SupportOracle",
    "WidthEstimate",
    "DualityCheck",
    "SymmetrizationResult",
    "PPTThresholdResult",
    "gaussian_mean_width_mc",
    "separable_width",
    "width_duality_check",
    "mc_intersection_ratio",
    "symmetrization_volume_ratio",
    "separability_threshold_estimate",
    "ppt_threshold_estimate",
]


@dataclass(frozen=True)
class SupportOracle:
    """Support-function evaluator of a convex body in R^dim.

    `support` maps a direction to h_K(direction) and must be positively
    homogeneous with h_K(0) = 0. `draw` produces a standard Gaussian
    direction in the body's ambient space; by default a plain Gaussian
    vector of length `dim`.
    """

    dim: int
    support: Callable[[np.ndarray], float]
    draw: Callable[[np.random.Generator], np.ndarray] | None = None

    def direction(self, rng: np.random.Generator) -> np.ndarray:
        if self.draw is not None:
            return self.draw(rng)
        return rng.standard_normal(self.dim)


@dataclass(frozen=True)
class WidthEstimate:
    """Gaussian mean width estimate; `width` is the spherical version."""

    value: float
    width: float
    stderr: float
    trials: int
    failures: int = 0
    lower_bound: bool = False
    seed: str = ""


def gaussian_mean_width_mc(oracle: SupportOracle, trials: int, stream) -> WidthEstimate:
    """Sample mean of h_K over standard Gaussian directions."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    vals = []
    failures = 0
    for rng in trial_generators(stream, trials):
        h = float(oracle.support(oracle.direction(rng)))
        if math.isnan(h):
            failures += 1
            continue
        vals.append(h)
    if not vals:
        raise RuntimeError("all support evaluations failed")
    est = from_samples(vals)
    gm = gamma_m(oracle.dim)
    return WidthEstimate(
        est.mean, est.mean / gm, est.stderr, trials, failures, seed=str(stream)
    )


def separable_width(
    dims: ProductDims, trials: int, stream, restarts: int = 20, tol: float = 1e-12
) -> WidthEstimate:
    """Certified lower bound on the Gaussian mean width of the centered
    separable body, via the product-state support maximization."""
    n = dims.n

    def support(G):
        return support_separable(G, dims, restarts=restarts, tol=tol, stream=0).value

    oracle = SupportOracle(dims.m, support, draw=lambda rng: sample_gue0(n, rng))
    est = gaussian_mean_width_mc(oracle, trials, stream)
    return WidthEstimate(
        est.value, est.width, est.stderr, est.trials, est.failures,
        lower_bound=True, seed=str(stream),
    )


# ---------------------------------------------------------------------------
# Width duality at (2, 2).
#
# For two qubits the separable body coincides with the PPT body, so its
# symmetrization is { A traceless : ||A||_op <= 1/4 and ||A^PT||_op <= 1/4 }
# and the gauge has the closed form 4 max(||A||_op, ||A^PT||_op). That makes
# both sides of the duality product computable with certified bounds:
# the gauge side exactly, the support side by ascending inside the body and
# rescaling candidates onto its boundary with the exact gauge.
# ---------------------------------------------------------------------------


def _pt_second_qubit(batch: np.ndarray) -> np.ndarray:
    """Batched partial transpose of the second factor on C^2 x C^2."""
    t = batch.shape[0]
    return batch.reshape(t, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(t, 4, 4)


def _gauge_sym_qubit_pair(batch: np.ndarray) -> np.ndarray:
    """Batched symmetrized separable gauge at (2,2): 4 max(op norms)."""
    lam = np.linalg.eigvalsh(batch)
    lam_pt = np.linalg.eigvalsh(_pt_second_qubit(batch))
    op = np.maximum(np.abs(lam[:, 0]), np.abs(lam[:, -1]))
    op_pt = np.maximum(np.abs(lam_pt[:, 0]), np.abs(lam_pt[:, -1]))
    return 4.0 * np.maximum(op, op_pt)


def _gauge_sep_qubit_pair(batch: np.ndarray) -> np.ndarray:
    """Batched one-sided separable gauge at (2,2): 4 max(-lambda_min, .)."""
    lam = np.linalg.eigvalsh(batch)
    lam_pt = np.linalg.eigvalsh(_pt_second_qubit(batch))
    return 4.0 * np.maximum.reduce(
        [np.maximum(-lam[:, 0], 0.0), np.maximum(-lam_pt[:, 0], 0.0)]
    )


def _clip_operator_norm(batch: np.ndarray, radius: float) -> np.ndarray:
    w, v = np.linalg.eigh(batch)
    w = np.clip(w, -radius, radius)
    return np.einsum("tij,tj,tkj->tik", v, w, v.conj())


def _certified_sym_support(G: np.ndarray, gauges: np.ndarray,
                           steps: int = 25, step_size: float = 0.05) -> np.ndarray:
    """Certified lower bounds on h_{Ssym}(G_t), batched.

    Ascent iterates x <- x + step * G followed by cheap cyclic projections
    toward the body; every iterate is then pulled exactly onto the boundary
    by the closed-form gauge before scoring, so the reported value is always
    attained by a feasible point regardless of how inexact the projections
    are.
    """
    t = G.shape[0]
    eye = np.eye(4)
    x = G / gauges[:, None, None]
    best = np.einsum("tij,tji->t", x, G).real
    for _ in range(steps):
        x = x + step_size * G
        tr = np.trace(x, axis1=1, axis2=2)[:, None, None] / 4.0
        x = x - tr * eye
        x = _clip_operator_norm(x, 0.25)
        x = _pt_second_qubit(_clip_operator_norm(_pt_second_qubit(x), 0.25))
        tr = np.trace(x, axis1=1, axis2=2)[:, None, None] / 4.0
        cand = x - tr * eye
        g = _gauge_sym_qubit_pair(cand)
        ok = g > 0
        val = np.where(ok, np.einsum("tij,tji->t", cand, G).real / np.where(ok, g, 1.0), 0.0)
        best = np.maximum(best, val)
    return best


@dataclass(frozen=True)
class DualityCheck:
    """Both sides of w_G(Ssym) * w_G(Ssym polar) >= gamma_m^2."""

    support_side: Estimate   # certified lower bound on w_G(Ssym)
    gauge_side: Estimate     # w_G(Ssym polar) = E ||G||_Ssym
    one_sided_gauge: Estimate  # E ||G||_S0, for the factor-two sandwich
    product: float
    gamma_sq: float
    relative_stderr: float

    @property
    def passed(self) -> bool:
        return self.product >= self.gamma_sq * (1.0 - 3.0 * self.relative_stderr)


def width_duality_check(dims: ProductDims, trials: int, stream) -> DualityCheck:
    """Check the elementary duality lower bound at (2, 2) with certified
    Monte-Carlo estimates on both sides."""
    if dims.factors != (2, 2):
        raise UnsupportedDimensionError(
            f"width duality check is implemented for (2, 2) only, got {dims.factors}"
        )
    if trials < 1:
        raise ValueError("trials must be >= 1")
    G = np.empty((trials, 4, 4), dtype=complex)
    for i, rng in enumerate(trial_generators(stream, trials)):
        G[i] = sample_gue0(4, rng)

    gauges = _gauge_sym_qubit_pair(G)
    support_vals = _certified_sym_support(G, gauges)
    gauge_est = from_samples(gauges, seed=str(stream))
    support_est = from_samples(support_vals, seed=str(stream))
    one_sided = from_samples(_gauge_sep_qubit_pair(G), seed=str(stream))

    product = support_est.mean * gauge_est.mean
    rel = math.hypot(
        support_est.stderr / support_est.mean, gauge_est.stderr / gauge_est.mean
    )
    return DualityCheck(
        support_side=support_est,
        gauge_side=gauge_est,
        one_sided_gauge=one_sided,
        product=product,
        gamma_sq=gamma_m(dims.m) ** 2,
        relative_stderr=rel,
    )


# ---------------------------------------------------------------------------
# Symmetrized-volume lower bound vol(-K n K) >= 2^{-m} vol(K) for centered
# convex bodies, checked by hit-or-miss Monte Carlo on random simplices.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetrizationResult:
    ratio: float
    stderr: float
    threshold: float
    points: int
    resamples: int
    seed: str = ""

    @property
    def passed(self) -> bool:
        return self.ratio >= self.threshold * (1.0 - 3.0 * self.stderr / max(self.ratio, 1e-300))


def mc_intersection_ratio(sample_point, contains_negated, points: int, stream) -> tuple[float, float]:
    """Fraction of uniform points x of K with -x in K, with binomial SE."""
    hits = 0
    for rng in trial_generators(stream, points):
        x = sample_point(rng)
        if contains_negated(-x):
            hits += 1
    p = hits / points
    se = math.sqrt(max(p * (1 - p), 1.0 / points) / points)
    return p, se


def symmetrization_volume_ratio(m: int, points: int, stream) -> SymmetrizationResult:
    """vol(-K n K) / vol(K) for a random simplex K centered at its center
    of mass, estimated by hit-or-miss sampling."""
    if not 2 <= m <= 4:
        raise ValueError("simplex dimension m must be in {2, 3, 4}")
    from .rng import SeededStream, as_generator

    base = stream if isinstance(stream, SeededStream) else None
    if base is None and isinstance(stream, (int, np.integer)):
        base = SeededStream(int(stream))
    resamples = 0
    while True:
        rng = (
            base.substream(resamples).generator()
            if base is not None
            else as_generator(stream)
        )
        verts = rng.standard_normal((m + 1, m))
        verts -= verts.mean(axis=0)  # center of mass of a simplex = vertex mean
        vol = abs(np.linalg.det(verts[1:] - verts[0])) / math.factorial(m)
        bbox = np.prod(verts.max(axis=0) - verts.min(axis=0))
        if vol > 1e-12 * bbox:
            break
        resamples += 1

    # barycentric membership: solve [verts^T; 1] b = [x; 1], need b >= 0
    mat = np.vstack([verts.T, np.ones(m + 1)])
    inv = np.linalg.inv(mat)

    def sample_point(r):
        w = r.dirichlet(np.ones(m + 1))
        return w @ verts

    def contains(y):
        b = inv @ np.append(y, 1.0)
        return bool(np.all(b >= -1e-12))

    sub = base.substream(10 ** 6) if base is not None else stream
    ratio, se = mc_intersection_ratio(sample_point, contains, points, sub)
    return SymmetrizationResult(ratio, se, 2.0 ** (-m), points, resamples, seed=str(stream))


# ---------------------------------------------------------------------------
# Threshold estimates.
# ---------------------------------------------------------------------------


def separability_threshold_estimate(d: int, trials: int, stream, tol: float = 1e-8) -> Estimate:
    """(E ||G||_S0 / d^2)^2 from the exact separable gauge; d = 2 only."""
    base = mean_gauge_gue(d, trials, stream, tol=tol)
    d2 = float(d * d)
    value = (base.mean / d2) ** 2
    stderr = 2.0 * base.mean / (d2 * d2) * base.stderr  # delta method
    return Estimate(value, stderr, trials, seed=str(stream))


@dataclass(frozen=True)
class PPTThresholdResult:
    mean_gauge: Estimate
    threshold: Estimate      # (E ||G||_PPT0 / d^2)^2
    width_polar: Estimate    # w(PPT0 polar) = E ||G||_PPT0 / gamma_m
    d: int
    m: int


def ppt_threshold_estimate(d: int, trials: int, stream) -> PPTThresholdResult:
    """PPT analogue of the threshold, available for every d via the
    closed-form PPT gauge. The polar width comes out ~ 2d, hence the
    threshold ~ 4 d^2."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = ProductDims((d, d))
    n = dims.n
    vals = np.empty(trials)
    for i, rng in enumerate(trial_generators(stream, trials)):
        vals[i] = gauge_ppt(sample_gue0(n, rng), dims)
    mean_est = from_samples(vals, seed=str(stream))
    d2 = float(d * d)
    thr = Estimate(
        (mean_est.mean / d2) ** 2,
        2.0 * mean_est.mean / (d2 * d2) * mean_est.stderr,
        trials,
        seed=str(stream),
    )
    gm = gamma_m(dims.m)
    wp = Estimate(mean_est.mean / gm, mean_est.stderr / gm, trials, seed=str(stream))
    return PPTThresholdResult(mean_est, thr, wp, d, dims.m)
