"""Entanglement detection and gauges of the state-space convex bodies.

Three nested bodies of centered (traceless) directions are measured here,
each as a Minkowski gauge ||A||_K = inf {t >= 0 : Id/n + A/t in K}:

  * all states          -- closed form n * max(0, -lambda_min(A)), since the
                           positive-semidefinite cone is self-dual;
  * PPT states          -- the intersection with the partially transposed
                           body, so the max of the two one-sided gauges;
  * separable states    -- bisection on t against an exact membership test,
                           available only for qubit-qubit and qubit-qutrit
                           systems where PPT is equivalent to separability.

Deciding separability is NP-hard in general, so for any other dimensions the
exact routines raise instead of silently substituting PPT; callers choose the
PPT body explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ProductDims, hermitize, hs_norm, partial_transpose, top_eigenpair
from .rng import as_generator
from .stats import Estimate, from_samples

__all__ = [
    "UnsupportedDimensionError",
    "GaugeResult",
    "SupportResult",
    "PPT_EIGENVALUE_TOL",
    "EXACT_DIMS",
    "min_pt_eigenvalue",
    "is_separable_exact",
    "gauge_states",
    "gauge_ppt",
    "gauge_separable",
    "gauge_separable_sym",
    "support_separable",
    "mean_gauge_gue",
]

# Eigenvalues above this threshold count as non-negative; boundary states
# are classified PPT.
PPT_EIGENVALUE_TOL = -1e-11

EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}

TRACE_TOL = 1e-10


class UnsupportedDimensionError(ValueError):
    """Exact separability was requested outside qubit-qubit / qubit-qutrit."""


@dataclass(frozen=True)
class GaugeResult:
    value: float
    bracket_width: float
    membership_evals: int


@dataclass(frozen=True)
class SupportResult:
    value: float
    maximizer: list
    restarts_used: int


def _require_traceless(A: np.ndarray) -> np.ndarray:
    A = hermitize(A)
    if abs(float(np.trace(A).real)) > TRACE_TOL * (1.0 + hs_norm(A)):
        raise ValueError("direction must be traceless")
    return A


def _require_bipartite(dims: ProductDims) -> None:
    if dims.k != 2:
        raise ValueError(
            f"bipartite dims required, got {dims.factors}; handle multipartite "
            "cuts one at a time"
        )


def min_pt_eigenvalue(rho) -> float:
    """Smallest eigenvalue of the partial transpose; >= -1e-11 means PPT."""
    from .ensembles import DensityMatrix

    if not isinstance(rho, DensityMatrix) or rho.dims is None:
        raise ValueError("need a DensityMatrix with bipartite dims")
    _require_bipartite(rho.dims)
    pt = partial_transpose(rho.matrix, rho.dims, transposed=1)
    return float(np.linalg.eigvalsh(pt)[0])


def is_separable_exact(rho) -> bool:
    """Exact separability for qubit-qubit and qubit-qutrit states (PPT test)."""
    from .ensembles import DensityMatrix

    if not isinstance(rho, DensityMatrix) or rho.dims is None:
        raise ValueError("need a DensityMatrix with bipartite dims")
    if rho.dims.factors not in EXACT_DIMS:
        raise UnsupportedDimensionError(
            f"exact separability is only decidable for 2x2 and 2x3 systems, "
            f"got {rho.dims.factors}; use the PPT criterion explicitly"
        )
    return min_pt_eigenvalue(rho) >= PPT_EIGENVALUE_TOL


def gauge_states(A: np.ndarray) -> float:
    """Gauge of the centered set of all states: n * max(0, -lambda_min(A))."""
    A = _require_traceless(A)
    n = A.shape[0]
    lam_min = float(np.linalg.eigvalsh(A)[0])
    return n * max(0.0, -lam_min)


def gauge_ppt(A: np.ndarray, dims: ProductDims) -> float:
    """Gauge of the centered PPT body: an intersection, so a max of gauges."""
    _require_bipartite(dims)
    A = _require_traceless(A)
    return max(gauge_states(A), gauge_states(partial_transpose(A, dims, 1)))


def _state_membership(A: np.ndarray, dims: ProductDims, t: float) -> bool:
    """Is Id/n + A/t an exactly-separable state? (2x2 / 2x3 only)."""
    n = dims.n
    sigma = np.eye(n) / n + A / t
    if float(np.linalg.eigvalsh(sigma)[0]) < PPT_EIGENVALUE_TOL:
        return False
    pt = partial_transpose(sigma, dims, transposed=1)
    return float(np.linalg.eigvalsh(pt)[0]) >= PPT_EIGENVALUE_TOL


def gauge_separable(A: np.ndarray, dims: ProductDims, tol: float = 1e-8) -> GaugeResult:
    """Gauge of the centered separable body, by bisection on the membership
    test. Bracket: the all-states gauge from below (separable states are
    states), the shared inradius 1/sqrt(n(n-1)) from above."""
    if dims.factors not in EXACT_DIMS:
        raise UnsupportedDimensionError(
            f"separable gauge needs an exact membership test, unavailable for "
            f"{dims.factors}"
        )
    A = _require_traceless(A)
    if A.shape[0] != dims.n:
        raise ValueError("matrix size does not match dims")
    norm = hs_norm(A)
    if norm == 0.0:
        return GaugeResult(0.0, 0.0, 0)

    n = dims.n
    lo = gauge_states(A)
    hi = math.sqrt(n * (n - 1)) * norm
    evals = 1
    if _state_membership(A, dims, lo):
        return GaugeResult(lo, 0.0, evals)
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        evals += 1
        if _state_membership(A, dims, mid):
            hi = mid
        else:
            lo = mid
    return GaugeResult(hi, hi - lo, evals)


def gauge_separable_sym(A: np.ndarray, dims: ProductDims, tol: float = 1e-8) -> GaugeResult:
    """Gauge of the symmetrized separable body S0 intersect -S0."""
    plus = gauge_separable(A, dims, tol)
    minus = gauge_separable(-np.asarray(A), dims, tol)
    best = plus if plus.value >= minus.value else minus
    return GaugeResult(best.value, best.bracket_width, plus.membership_evals + minus.membership_evals)


def _contracted_factor(T: np.ndarray, psis: list[np.ndarray], j: int) -> np.ndarray:
    """d_j x d_j matrix M with <a|M|b> = <..psi,a,psi..|A|..psi,b,psi..>."""
    k = len(psis)
    letters = "abcdefghijkl"
    row = [letters[i] for i in range(k)]
    col = [letters[k + i] for i in range(k)]
    operands = [T]
    script = "".join(row) + "".join(col)
    for i in range(k):
        if i == j:
            continue
        script += "," + row[i]
        operands.append(psis[i].conj())
        script += "," + col[i]
        operands.append(psis[i])
    script += "->" + row[j] + col[j]
    return np.einsum(script, *operands)


def support_separable(
    A: np.ndarray,
    dims: ProductDims,
    restarts: int = 20,
    tol: float = 1e-12,
    max_sweeps: int = 500,
    stream=None,
) -> SupportResult:
    """Support function of the centered separable body in direction A.

    For traceless A this is the maximum of <psi|A|psi> over product unit
    vectors psi = psi_1 x ... x psi_k. Alternating maximization: with all
    factors but one frozen the optimum is the top eigenvector of the
    contracted operator, so each half-step is exact and the objective never
    decreases. Restarts are independent uniform product states. The result
    is a certified lower bound on the support function (the maximization is
    a heuristic; it can stop at a local maximum).
    """
    if dims.k < 2:
        raise ValueError("need at least two tensor factors")
    A = _require_traceless(A)
    if A.shape[0] != dims.n:
        raise ValueError("matrix size does not match dims")
    rng = as_generator(stream if stream is not None else 0)
    ds = dims.factors
    T = A.reshape(ds + ds)

    best_val = -np.inf
    best_psis: list[np.ndarray] = []
    for _ in range(restarts):
        psis = []
        for d in ds:
            v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            psis.append(v / np.linalg.norm(v))
        prev = -np.inf
        for _ in range(max_sweeps):
            val = prev
            for j in range(dims.k):
                M = _contracted_factor(T, psis, j)
                val, vec = top_eigenpair(M)
                psis[j] = vec
            if val - prev < tol:
                break
            prev = val
        if val > best_val:
            best_val = val
            best_psis = [p.copy() for p in psis]

    # Report the value of the witness itself so the lower-bound contract
    # holds exactly.
    M = _contracted_factor(T, best_psis, 0)
    witness_val = float(np.real(best_psis[0].conj() @ M @ best_psis[0]))
    return SupportResult(witness_val, best_psis, restarts)


def mean_gauge_gue(d: int, trials: int, stream, tol: float = 1e-8) -> Estimate:
    """Monte-Carlo mean of the separable gauge of trace-zero GUE draws on
    C^d x C^d. Only d = 2 has an exact separable gauge."""
    if d != 2:
        raise UnsupportedDimensionError(
            "the separable gauge is exact only at d = 2; use the PPT gauge for d >= 3"
        )
    if trials < 1:
        raise ValueError("trials must be >= 1")
    from .ensembles import sample_gue0
    from .rng import trial_generators

    dims = ProductDims((2, 2))
    gauges = np.empty(trials)
    for t, rng in enumerate(trial_generators(stream, trials)):
        G = sample_gue0(4, rng)
        gauges[t] = gauge_separable(G, dims, tol).value
    return from_samples(gauges, seed=str(stream))
