"""Smallest eigenpair of a real symmetric matrix with a fixed sign convention."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

# Above this dimension a full LAPACK factorization stops paying off and the
# matrix is banded enough for Lanczos.
DENSE_DIM_LIMIT = 2048
DEFAULT_TOL = 1e-10


class EigensolverError(RuntimeError):
    """The eigensolver failed to converge or the result failed its residual check."""


@dataclass(frozen=True)
class EigPair:
    """Eigenvalue with its unit-norm eigenvector."""

    value: float
    vector: np.ndarray


def smallest_eigpair(a: np.ndarray, tol: float = DEFAULT_TOL) -> EigPair:
    """Algebraically smallest eigenvalue and eigenvector of a symmetric matrix.

    Dense solve up to DENSE_DIM_LIMIT, restarted Lanczos above.  The
    eigenvector sign is fixed so its largest-magnitude component is positive
    (ties resolved toward the lowest index), and the residual
    ||A v - lambda v|| must not exceed tol * max(1, |lambda|).
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("matrix must be non-empty")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix must be exactly symmetric")

    if a.shape[0] <= DENSE_DIM_LIMIT:
        w, v = scipy.linalg.eigh(a, subset_by_index=(0, 0))
    else:
        try:
            w, v = scipy.sparse.linalg.eigsh(a, k=1, which="SA", tol=tol)
        except scipy.sparse.linalg.ArpackNoConvergence as err:
            raise EigensolverError(f"Lanczos did not converge: {err}") from err
    value = float(w[0])
    vector = v[:, 0]
    vector = vector / np.linalg.norm(vector)
    if vector[int(np.argmax(np.abs(vector)))] < 0:
        vector = -vector

    residual = float(np.linalg.norm(a @ vector - value * vector))
    if residual > tol * max(1.0, abs(value)):
        raise EigensolverError(
            f"residual {residual:.3e} exceeds {tol:g} * max(1, |{value:.6g}|)"
        )
    return EigPair(value=value, vector=vector)
