"""Standard-simplex geometry: projection, centroid, height and face distances.

The standard simplex here is the convex hull of the unit basis vectors of
R^q, i.e. the set of q-dimensional stochastic vectors.  Its side length is
sqrt(2), which fixes the scale of every distance below.
"""

from __future__ import annotations

import math

import numpy as np

from .types import STOCHASTIC_TOL


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection of a real vector onto the standard simplex.

    Sort-and-threshold method: O(q log q), exact in exact arithmetic.
    Deterministic; sorting ties do not affect the result because the output
    depends only on the threshold, not the tie order.  Inputs already
    feasible (within the construction tolerance) pass through unchanged,
    which makes the projection exactly idempotent in floating point.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got ndim={v.ndim}")
    if v.size == 0:
        raise ValueError("cannot project an empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("cannot project a vector with non-finite entries")
    if v.min() >= 0.0 and abs(v.sum() - 1.0) <= STOCHASTIC_TOL:
        return v.copy()
    tau = _simplex_thresholds(v[None, :])[0]
    return np.maximum(v - tau, 0.0)


def project_columns_to_simplex(V) -> np.ndarray:
    """Column-wise simplex projection (vectorized over all columns).

    Column j equals ``project_to_simplex(V[:, j])`` exactly, including the
    feasible-input pass-through.
    """
    V = np.asarray(V, dtype=np.float64)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {V.shape}")
    tau = _simplex_thresholds(V.T)
    out = np.maximum(V - tau[None, :], 0.0)
    feasible = (V.min(axis=0) >= 0.0) & (np.abs(V.sum(axis=0) - 1.0) <= STOCHASTIC_TOL)
    if np.any(feasible):
        out[:, feasible] = V[:, feasible]
    return out


def _simplex_thresholds(rows: np.ndarray) -> np.ndarray:
    """Per-row threshold tau with max(row - tau, 0) summing to one."""
    q = rows.shape[1]
    s = np.sort(rows, axis=1)[:, ::-1]
    cumsum = np.cumsum(s, axis=1)
    j = np.arange(1, q + 1)
    candidate = (cumsum - 1.0) / j
    # rho: last position where the sorted entry still exceeds the candidate
    mask = s > candidate
    rho = q - 1 - np.argmax(mask[:, ::-1], axis=1)
    rows_idx = np.arange(rows.shape[0])
    return candidate[rows_idx, rho]


def simplex_centroid(q: int) -> np.ndarray:
    """Center point of the standard simplex: the uniform vector 1/q."""
    if q < 1:
        raise ValueError(f"simplex dimension must be >= 1, got q={q}")
    return np.full(q, 1.0 / q)


def simplex_height(m: int) -> float:
    """Height of the standard simplex on m vertices.

    Defined for m >= 2; equals sqrt(m / (2(m-1))) * sqrt(2).  For m = 2 this
    is the side length sqrt(2) itself.
    """
    if m < 2:
        raise ValueError(f"height needs at least 2 vertices, got m={m}")
    return math.sqrt(m / (2.0 * (m - 1))) * math.sqrt(2.0)


def vertex_to_subsimplex_distance(k: int) -> float:
    """Distance from an unselected basis vertex to the span of k selected ones.

    Equals sqrt((k+1)/(2k)) * sqrt(2), the height of the simplex formed by
    the k selected vertices plus the unselected one.  Squared, this is
    (k+1)/k, which tends to 1 as k grows.
    """
    if k < 1:
        raise ValueError(f"need at least one selected vertex, got k={k}")
    return math.sqrt((k + 1) / (2.0 * k)) * math.sqrt(2.0)
