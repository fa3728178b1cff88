"""Core matrix types, stochasticity checks, and Frobenius arithmetic.

Conventions used throughout the package:

* data matrices are ``m x n`` float64 arrays whose *columns* are points
  (file I/O uses the transposed, points-as-rows layout; see :mod:`aakit.io`);
* a stochastic vector is non-negative and sums to one, a column stochastic
  matrix has stochastic columns.

All functions are pure and all returned arrays are frozen (non-writeable),
so values can be shared freely between threads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

#: tolerance enforced right after constructing/normalizing a stochastic vector
STOCHASTIC_TOL = 1e-12
#: looser tolerance used by downstream checks, absorbs accumulation error
CHECK_TOL = 1e-10


class ShapeError(ValueError):
    """Raised when matrix operands have non-conformable dimensions."""


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Validate and return a 2-D float64 matrix with finite entries."""
    M = np.asarray(values, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={M.ndim}")
    if M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        bad = np.argwhere(~np.isfinite(M))[0]
        raise ValueError(
            f"{name} contains a non-finite entry at row {bad[0]}, column {bad[1]}"
        )
    return M


def frozen(M: np.ndarray) -> np.ndarray:
    """Return an owned, read-only copy of ``M`` (immutability contract)."""
    out = np.array(M, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


def frobenius_sq(M) -> float:
    """Squared Frobenius norm: the sum of all squared entries."""
    M = as_matrix(M)
    return float(np.sum(M * M))


def residual_sq(X, B, A) -> float:
    """Reconstruction objective ``‖X - X B A‖²`` (squared Frobenius).

    ``X`` is m x n, ``B`` n x k and ``A`` k x n; raises :class:`ShapeError`
    naming the offending dimensions when the product is not conformable.
    """
    X = as_matrix(X, "X")
    B = as_matrix(B, "B")
    A = as_matrix(A, "A")
    n = X.shape[1]
    if B.shape[0] != n:
        raise ShapeError(
            f"B has {B.shape[0]} rows but X has {n} columns; X B is not conformable"
        )
    if A.shape[0] != B.shape[1]:
        raise ShapeError(
            f"A has {A.shape[0]} rows but B has {B.shape[1]} columns; B A is not conformable"
        )
    if A.shape[1] != n:
        raise ShapeError(
            f"A has {A.shape[1]} columns but X has {n}; X - X B A is not conformable"
        )
    R = X - (X @ B) @ A
    return float(np.sum(R * R))


def normalize_column(v) -> np.ndarray:
    """Turn a raw real vector into a stochastic vector.

    Negative entries are clamped to zero, then the vector is rescaled to
    sum one.  An all-nonpositive input degenerates to the uniform vector
    (logged as a warning) so iterative callers stay total.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got ndim={v.ndim}")
    if v.size == 0:
        raise ValueError("cannot normalize an empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("cannot normalize a vector with non-finite entries")
    clipped = np.maximum(v, 0.0)
    total = clipped.sum()
    if total <= 0.0:
        logger.warning(
            "normalize_column: all entries non-positive, falling back to uniform"
        )
        out = np.full(v.size, 1.0 / v.size)
        out.setflags(write=False)
        return out
    out = clipped / total
    out.setflags(write=False)
    return out


def is_column_stochastic(M, tol: float = CHECK_TOL) -> bool:
    """True when every column of ``M`` is non-negative and sums to one."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.size == 0 or not np.all(np.isfinite(M)):
        return False
    if np.any(M < -tol):
        return False
    return bool(np.all(np.abs(M.sum(axis=0) - 1.0) <= tol))


def check_column_stochastic(M, tol: float = CHECK_TOL, name: str = "matrix") -> np.ndarray:
    """Validate column stochasticity, returning the array unchanged."""
    M = as_matrix(M, name)
    if np.any(M < -tol):
        j = int(np.argwhere(M < -tol)[0][1])
        raise ValueError(f"{name} column {j} has a negative entry")
    sums = M.sum(axis=0)
    off = np.abs(sums - 1.0)
    if np.any(off > tol):
        j = int(np.argmax(off))
        raise ValueError(
            f"{name} column {j} sums to {sums[j]!r}, expected 1 within {tol}"
        )
    return M


@dataclass(frozen=True)
class Factorization:
    """Result bundle of one archetypal factorization ``X ≈ X B A``.

    ``B`` mixes data columns into archetypes (column stochastic, n x k),
    ``A`` mixes archetypes back into data approximations (k x n), and
    ``Z = X B`` holds the archetypes themselves (m x k).  ``rss`` is the
    squared Frobenius residual; ``rss_history`` records it once per outer
    iteration and is non-increasing.
    """

    B: np.ndarray
    A: np.ndarray
    Z: np.ndarray
    rss: float
    rss_history: tuple[float, ...]
    iterations: int
    converged: bool
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "B", frozen(self.B))
        object.__setattr__(self, "A", frozen(self.A))
        object.__setattr__(self, "Z", frozen(self.Z))
        object.__setattr__(self, "rss_history", tuple(float(r) for r in self.rss_history))

    @property
    def archetypes(self) -> np.ndarray:
        """Alias for ``Z``: the archetype columns."""
        return self.Z

    @property
    def k(self) -> int:
        return self.B.shape[1]
