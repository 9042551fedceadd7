"""Dense complex linear algebra over the Hilbert-Schmidt inner product.

Tensor-factor convention, fixed project-wide: composite indices are row-major
with the FIRST factor most significant, i.e. the basis vector of
C^{d1} x C^{d2} with index a = i*d2 + j is e_i (x) e_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

__all__ = [
    "ProductDims",
    "hermitize",
    "traceless_part",
    "hs_inner",
    "hs_norm",
    "hermitian_eigenvalues",
    "top_eigenpair",
    "kron",
    "partial_trace",
    "partial_transpose",
]


@dataclass(frozen=True)
class ProductDims:
    """Factor dimensions (d1, ..., dk) of a tensor-product Hilbert space."""

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if len(factors) < 1:
            raise ValueError("need at least one factor")
        if any(d < 2 for d in factors):
            raise ValueError(f"factor dimensions must be >= 2, got {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        """Total Hilbert-space dimension, the product of the factors."""
        return int(reduce(lambda a, b: a * b, self.factors, 1))

    @property
    def m(self) -> int:
        """Real dimension n^2 - 1 of the traceless self-adjoint space."""
        return self.n * self.n - 1

    @classmethod
    def of(cls, *factors: int) -> "ProductDims":
        return cls(tuple(factors))


def _check_square(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise ValueError("matrix has non-finite entries")
    return A


def hermitize(A: np.ndarray) -> np.ndarray:
    """Return the self-adjoint part (A + A^dagger) / 2."""
    A = _check_square(A)
    return (A + A.conj().T) / 2


def traceless_part(A: np.ndarray) -> np.ndarray:
    """Project A onto the trace-zero hyperplane: A - (tr A / n) Id."""
    A = _check_square(A)
    n = A.shape[0]
    return A - (np.trace(A) / n) * np.eye(n, dtype=A.dtype)


def hs_inner(A: np.ndarray, B: np.ndarray) -> float:
    """Hilbert-Schmidt inner product tr(A B) of self-adjoint A, B (real)."""
    val = np.trace(A @ B)
    return float(val.real)


def hs_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A))


def hermitian_eigenvalues(H: np.ndarray) -> np.ndarray:
    """All real eigenvalues of self-adjoint H, sorted non-increasing."""
    H = hermitize(H)
    return np.linalg.eigvalsh(H)[::-1]


def top_eigenpair(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of self-adjoint H and a unit eigenvector."""
    H = hermitize(H)
    w, v = np.linalg.eigh(H)
    return float(w[-1]), v[:, -1]


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor most significant."""
    return np.kron(np.asarray(A), np.asarray(B))


def _validate_dims(H: np.ndarray, dims: ProductDims) -> None:
    if H.shape[0] != dims.n:
        raise ValueError(f"matrix size {H.shape[0]} does not match dims {dims.factors}")


def partial_trace(H: np.ndarray, dims: ProductDims, keep) -> np.ndarray:
    """Trace out all tensor factors not in `keep` (iterable of factor indices).

    Preserves the trace; the result acts on the kept factors in their
    original order.
    """
    H = _check_square(H)
    _validate_dims(H, dims)
    ds = dims.factors
    k = dims.k
    keep = sorted(set(int(i) for i in np.atleast_1d(np.asarray(keep, dtype=int))))
    if any(i < 0 or i >= k for i in keep):
        raise ValueError(f"kept factor indices {keep} out of range for {k} factors")
    if len(keep) == k:
        return H.copy()

    T = H.reshape(ds + ds)
    # einsum: row index letters 0..k-1, column letters k..2k-1; traced factors
    # share a letter between row and column side.
    letters = "abcdefghijklmnopqrstuvwx"
    row = list(letters[:k])
    col = list(letters[k : 2 * k])
    for i in range(k):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(letters[k + i] for i in keep)
    res = np.einsum("".join(row) + "".join(col) + "->" + out, T)
    nk = int(np.prod([ds[i] for i in keep]))
    return res.reshape(nk, nk)


def partial_transpose(H: np.ndarray, dims: ProductDims, transposed) -> np.ndarray:
    """Transpose the given tensor factor(s); an involution.

    For a bipartite product this sends A (x) B to A (x) B^T when the second
    factor is transposed.
    """
    H = _check_square(H)
    _validate_dims(H, dims)
    ds = dims.factors
    k = dims.k
    tset = sorted(set(int(i) for i in np.atleast_1d(np.asarray(transposed, dtype=int))))
    if any(i < 0 or i >= k for i in tset):
        raise ValueError(f"transposed factor indices {tset} out of range for {k} factors")

    T = H.reshape(ds + ds)
    perm = list(range(2 * k))
    for i in tset:
        perm[i], perm[k + i] = perm[k + i], perm[i]
    return T.transpose(perm).reshape(dims.n, dims.n)
