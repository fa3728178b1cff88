"""Greedy furthest-sum selection of extreme data columns.

Picks k columns that are as far apart as possible: the first maximizes the
distance to the dataset centroid, every next one maximizes the sum of
Euclidean distances to the columns already selected.  Selecting a column
fixes the corresponding mixing column to an indicator, so the derived
factorization only has to solve for the coefficient matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver import SolverConfig, solve_simplex_ls_batch
from .types import Factorization, as_matrix


@dataclass(frozen=True)
class SelectionResult:
    """Ordered greedy picks plus the objective value at each pick."""

    indices: tuple[int, ...]
    selection_scores: tuple[float, ...]


def select_sivm(X, k: int, seed: int = 0) -> SelectionResult:
    """Greedy furthest-sum selection of ``k`` distinct column indices.

    Deterministic: ties break toward the lowest index, and ``seed`` is
    accepted for interface stability only (the rule involves no sampling).
    """
    X = as_matrix(X, "X")
    n = X.shape[1]
    if k < 1:
        raise ValueError(f"k must be >= 1, got k={k}")
    if k > n:
        raise ValueError(f"cannot select k={k} columns from n={n}")

    centroid = X.mean(axis=1)
    dist_to_centroid = np.linalg.norm(X - centroid[:, None], axis=0)
    first = int(np.argmax(dist_to_centroid))
    indices = [first]
    scores = [float(dist_to_centroid[first])]

    # running sum of distances to the selected set
    sum_dist = np.linalg.norm(X - X[:, [first]], axis=0)
    selected = np.zeros(n, dtype=bool)
    selected[first] = True

    for _ in range(1, k):
        masked = np.where(selected, -np.inf, sum_dist)
        pick = int(np.argmax(masked))
        indices.append(pick)
        scores.append(float(sum_dist[pick]))
        selected[pick] = True
        sum_dist += np.linalg.norm(X - X[:, [pick]], axis=0)

    return SelectionResult(indices=tuple(indices), selection_scores=tuple(scores))


def indicator_mixing(n: int, indices) -> np.ndarray:
    """n x k matrix whose j-th column is the indicator of ``indices[j]``."""
    B = np.zeros((n, len(indices)))
    for j, idx in enumerate(indices):
        B[idx, j] = 1.0
    return B


def sivm_factorization(
    X, k: int, inner: SolverConfig | None = None, seed: int = 0
) -> Factorization:
    """Fast approximative factorization with greedily selected archetypes.

    The mixing matrix is fixed to indicator columns at the selected points;
    the coefficients are then the optimal simplex-constrained least-squares
    solution against those archetypes.
    """
    X = as_matrix(X, "X")
    selection = select_sivm(X, k, seed)
    B = indicator_mixing(X.shape[1], selection.indices)
    Z = X[:, list(selection.indices)]
    A = solve_simplex_ls_batch(Z, X, inner)
    R = X - Z @ A
    rss = float(np.sum(R * R))
    return Factorization(
        B=B,
        A=A,
        Z=Z,
        rss=rss,
        rss_history=(rss,),
        iterations=0,
        converged=True,
        meta={
            "method": "sivm",
            "seed": int(seed),
            "selected_indices": list(selection.indices),
            "selection_scores": list(selection.selection_scores),
        },
    )
