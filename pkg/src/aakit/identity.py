"""Constructive stochastic low-rank approximations of the identity matrix.

Approximating I_q by a product B A of column stochastic factors with
k < q inner columns can never be exact, and how close it can get has exact
closed forms depending on where the mixing columns are placed inside the
standard simplex:

* vertex placement (greedy selection): error (q - k)(k + 1)/k,
* the simplex center for k = 1: error q - 1,
* one center per part of a k-part partition: error q - k (which matches the
  unconstrained rank-k optimum, so it is the best achievable).

Each construction here returns explicit factors, and :func:`certify` checks
the measured Frobenius gap against the predicted closed form to produce a
machine-checkable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import ShapeError, as_matrix

#: certificates compare exact constructions, only float accumulation remains
CERT_TOL = 1e-8

KINDS = ("sivm", "centroid", "partition")


@dataclass(frozen=True)
class IdentityApproxCertificate:
    """One verified (construction, predicted, measured) triple."""

    q: int
    k: int
    kind: str
    partition: tuple[int, ...] | None
    predicted_error: float
    measured_error: float
    abs_gap: float
    passed: bool

    def to_dict(self) -> dict:
        out = {
            "q": self.q,
            "k": self.k,
            "kind": self.kind,
            "predicted_error": self.predicted_error,
            "measured_error": self.measured_error,
            "abs_gap": self.abs_gap,
            "pass": self.passed,
        }
        if self.partition is not None:
            out["partition"] = list(self.partition)
        return out


def validate_partition(q: int, parts) -> tuple[int, ...]:
    """Check that ``parts`` are positive integers summing to q."""
    parts = tuple(int(p) for p in parts)
    if len(parts) < 1:
        raise ValueError("partition needs at least one part")
    if any(p < 1 for p in parts):
        raise ValueError(f"partition parts must be >= 1, got {parts}")
    if sum(parts) != q:
        raise ValueError(f"partition {parts} sums to {sum(parts)}, expected q={q}")
    return parts


def balanced_partition(q: int, k: int) -> tuple[int, ...]:
    """Canonical k-part partition of q with sizes differing by at most one."""
    if not 1 <= k <= q:
        raise ValueError(f"need 1 <= k <= q, got k={k}, q={q}")
    base, extra = divmod(q, k)
    return tuple(base + 1 for _ in range(extra)) + tuple(base for _ in range(k - extra))


def sivm_identity_factors(q: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Factors from placing the k mixing columns on the first k basis vertices.

    The coefficient column of a selected vertex is the matching indicator;
    an unselected vertex gets the uniform 1/k column, its closest point in
    the selected sub-simplex by symmetry.  The squared error is exactly
    (q - k)(k + 1)/k.
    """
    if not 1 <= k <= q:
        raise ValueError(f"need 1 <= k <= q, got k={k}, q={q}")
    B = np.zeros((q, k))
    B[np.arange(k), np.arange(k)] = 1.0
    A = np.full((k, q), 1.0 / k)
    A[:, :k] = np.eye(k)
    return B, A


def centroid_rank1_factors(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Best rank-1 stochastic factors: the simplex center against all ones.

    The single mixing column sits at the center 1/q of the simplex; the
    coefficient row is forced to all ones (the only 1 x q stochastic-column
    matrix).  The squared error is exactly q - 1.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got q={q}")
    B = np.full((q, 1), 1.0 / q)
    A = np.ones((1, q))
    return B, A


def partition_identity_factors(q: int, parts) -> tuple[np.ndarray, np.ndarray]:
    """Factors from one mixing column at the center of each partition part.

    Part j of size q_j contributes q_j - 1 to the squared error, so the
    total is q - k regardless of how the parts are sized.
    """
    parts = validate_partition(q, parts)
    k = len(parts)
    B = np.zeros((q, k))
    A = np.zeros((k, q))
    start = 0
    for j, size in enumerate(parts):
        stop = start + size
        B[start:stop, j] = 1.0 / size
        A[j, start:stop] = 1.0
        start = stop
    return B, A


def frobenius_gap(B, A) -> float:
    """Measured squared Frobenius distance ‖I - B A‖² by materialization.

    This is the reference oracle every certificate is checked against; it
    never reuses the closed forms.
    """
    B = as_matrix(B, "B")
    A = as_matrix(A, "A")
    q = B.shape[0]
    if A.shape[1] != q:
        raise ShapeError(f"B is {B.shape} but A is {A.shape}; B A must be square")
    if A.shape[0] != B.shape[1]:
        raise ShapeError(
            f"A has {A.shape[0]} rows but B has {B.shape[1]} columns; B A is not conformable"
        )
    D = np.eye(q) - B @ A
    return float(np.sum(D * D))


def worst_case_bound(q: int) -> float:
    """Upper bound 2q on ‖I - B A‖² for any stochastic factor pair."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got q={q}")
    return 2.0 * q


def rank_lower_bound(q: int, k: int) -> float:
    """Best possible squared error q - k for any rank-<=k approximation."""
    if not 1 <= k <= q:
        raise ValueError(f"need 1 <= k <= q, got k={k}, q={q}")
    return float(q - k)


def sivm_identity_error(q: int, k: int) -> float:
    """Closed-form squared error (q - k)(k + 1)/k of the vertex placement."""
    if not 1 <= k <= q:
        raise ValueError(f"need 1 <= k <= q, got k={k}, q={q}")
    return (q - k) * (k + 1) / k


def relative_accuracy(k: int) -> float:
    """Accuracy ratio k/(k+1) of vertex placement versus the optimum.

    Independent of q; strictly increasing in k, below 1 for all finite k,
    and above 90% from k = 10 on.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got k={k}")
    return k / (k + 1)


def certify(
    q: int, k: int, kind: str, partition=None, tol: float = CERT_TOL
) -> IdentityApproxCertificate:
    """Build a construction, measure it, and certify the closed form.

    ``kind`` is one of ``sivm``, ``centroid``, ``partition``.  For
    ``partition`` the default is the balanced k-part partition (the error
    q - k does not depend on part sizes).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown construction kind {kind!r}, expected one of {KINDS}")
    parts: tuple[int, ...] | None = None
    if kind == "sivm":
        B, A = sivm_identity_factors(q, k)
        predicted = sivm_identity_error(q, k)
    elif kind == "centroid":
        if k != 1:
            raise ValueError(f"centroid construction is rank-1 only, got k={k}")
        B, A = centroid_rank1_factors(q)
        predicted = float(q - 1)
    else:
        parts = validate_partition(q, partition) if partition is not None else balanced_partition(q, k)
        if len(parts) != k:
            raise ValueError(f"partition has {len(parts)} parts, expected k={k}")
        B, A = partition_identity_factors(q, parts)
        predicted = float(q - k)
    measured = frobenius_gap(B, A)
    gap = abs(measured - predicted)
    return IdentityApproxCertificate(
        q=q,
        k=k,
        kind=kind,
        partition=parts,
        predicted_error=float(predicted),
        measured_error=measured,
        abs_gap=gap,
        passed=bool(gap <= tol),
    )
