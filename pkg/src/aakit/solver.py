"""Simplex-constrained least squares via projected gradient descent.

Solves ``min ‖x - Z a‖²`` over stochastic coefficient vectors ``a`` — the
inner subproblem behind every coefficient column of a factorization.  The
batch form runs all columns of a right-hand-side matrix simultaneously with
per-column convergence, which is numerically equivalent to independent
sequential solves (there is no cross-column state).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .simplex import project_columns_to_simplex
from .types import ShapeError, as_matrix

# margin applied to the power-iteration eigenvalue estimate, which
# converges from below; keeps the 1/L step inside the monotone regime
_STEP_SAFETY = 1.01
# absolute slack in the relative-decrease stopping rule so solves whose
# optimum is exactly zero terminate once the objective hits the float floor
_STOP_FLOOR = 1e-18


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the projected-gradient inner solver.

    ``tol`` is a relative objective-decrease threshold.  The step size is a
    fixed 1/L where L is the largest eigenvalue of ``Z^T Z`` estimated by
    power iteration (``power_iters`` steps, ``power_tol`` relative change),
    with a trace upper bound as fallback when the iteration stalls.
    """

    max_inner_iters: int = 200
    tol: float = 1e-9
    power_iters: int = 50
    power_tol: float = 1e-8

    def __post_init__(self):
        if self.max_inner_iters < 1:
            raise ValueError(f"max_inner_iters must be >= 1, got {self.max_inner_iters}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


def gram_max_eigenvalue(G: np.ndarray, iters: int = 50, tol: float = 1e-8) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by power iteration.

    Deterministic ramp start vector; falls back to the trace (a valid upper
    bound for PSD matrices) when the iteration degenerates.
    """
    q = G.shape[0]
    trace = float(np.trace(G))
    if trace <= 0.0:
        return 0.0
    v = np.arange(1.0, q + 1.0)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = G @ v
        norm = np.linalg.norm(w)
        if norm <= trace * 1e-300:
            return trace
        lam_new = float(v @ w)
        v = w / norm
        if abs(lam_new - lam) <= tol * abs(lam_new):
            lam = lam_new
            break
        lam = lam_new
    if lam <= 0.0:
        return trace
    return min(lam, trace)


def solve_simplex_ls_batch(Z, X, cfg: SolverConfig | None = None, warm=None) -> np.ndarray:
    """Solve ``min ‖x_i - Z a_i‖²`` over the simplex for every column of X.

    Parameters
    ----------
    Z : array, m x k
        Fixed basis whose columns are combined.
    X : array, m x n
        Right-hand sides, one per column.
    cfg : SolverConfig, optional
    warm : array, k x n, optional
        Warm-start coefficients; defaults to uniform 1/k columns.

    Returns
    -------
    A : array, k x n
        Column-stochastic coefficients.  Column i depends only on
        (Z, x_i, warm_i), never on other columns.
    """
    cfg = cfg or SolverConfig()
    Z = as_matrix(Z, "Z")
    X = as_matrix(X, "X")
    m, k = Z.shape
    if X.shape[0] != m:
        raise ShapeError(
            f"Z has {m} rows but X has {X.shape[0]}; columns live in different spaces"
        )
    n = X.shape[1]

    if warm is None:
        A = np.full((k, n), 1.0 / k)
    else:
        A = np.asarray(warm, dtype=np.float64).copy()
        if A.shape != (k, n):
            raise ShapeError(f"warm start has shape {A.shape}, expected {(k, n)}")

    gram = Z.T @ Z
    lam = gram_max_eigenvalue(gram, cfg.power_iters, cfg.power_tol)
    if lam <= 0.0:
        # Z is the zero map: objective is constant, any feasible point optimal
        return A
    step = 1.0 / (_STEP_SAFETY * lam)

    residual = Z @ A - X
    obj = np.einsum("ij,ij->j", residual, residual)
    active = np.arange(n)

    for _ in range(cfg.max_inner_iters):
        if active.size == 0:
            break
        grad_half = Z.T @ residual[:, active]
        candidate = project_columns_to_simplex(A[:, active] - step * grad_half)
        if __debug__:
            assert candidate.min() >= 0.0
            assert np.allclose(candidate.sum(axis=0), 1.0, atol=1e-10)
        res_new = Z @ candidate - X[:, active]
        obj_new = np.einsum("ij,ij->j", res_new, res_new)

        improved = obj_new <= obj[active]
        take = active[improved]
        A[:, take] = candidate[:, improved]
        residual[:, take] = res_new[:, improved]

        decrease = obj[active] - obj_new
        done = (decrease < cfg.tol * obj[active] + _STOP_FLOOR) | ~improved
        obj[take] = obj_new[improved]
        active = active[~done]

    return A


def solve_simplex_ls(Z, x, cfg: SolverConfig | None = None, warm_start=None) -> np.ndarray:
    """Single right-hand-side form of :func:`solve_simplex_ls_batch`."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"x must be a 1-D vector, got ndim={x.ndim}")
    warm = None if warm_start is None else np.asarray(warm_start, dtype=np.float64)[:, None]
    A = solve_simplex_ls_batch(Z, x[:, None], cfg, warm)
    return A[:, 0]


def simplex_ls_objective(Z, a, x) -> float:
    """Objective ‖x − Z a‖² evaluated directly (no Gram cancellation)."""
    r = np.asarray(Z, dtype=np.float64) @ np.asarray(a, dtype=np.float64) - np.asarray(
        x, dtype=np.float64
    )
    return float(r @ r)


def simplex_ls_gradient(Z, a, x) -> np.ndarray:
    """Gradient 2 Z^T (Z a − x) of the squared-residual objective."""
    Z = np.asarray(Z, dtype=np.float64)
    r = Z @ np.asarray(a, dtype=np.float64) - np.asarray(x, dtype=np.float64)
    return 2.0 * (Z.T @ r)
