"""Alternating minimization of the convexity-constrained factorization.

``fit_aa`` minimizes ‖X - X B A‖² over column stochastic B (n x k) and
A (k x n) by alternating two half-steps:

* fix B: every column of A is an independent simplex-constrained
  least-squares solve against the archetypes Z = X B (warm-started);
* fix A: projected gradient on the whole of B, whose columns couple
  through A; the step is 1/L with L estimated by power iteration on the
  lifted Hessian action M -> (X^T X) M (A A^T).

The objective is convex in either factor alone, so each half-step is a
descent step and the recorded residual history is non-increasing.  It is
not jointly convex, hence the extreme-point (greedy-selection) default
initialization to avoid poor basins.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .simplex import project_columns_to_simplex
from .sivm import indicator_mixing, select_sivm
from .solver import SolverConfig, solve_simplex_ls_batch
from .types import Factorization, as_matrix

INIT_MODES = ("sivm", "random", "uniform")

_STEP_SAFETY = 1.01
_STOP_FLOOR = 1e-18
# projected-gradient steps per mixing-matrix pass; short passes against the
# current A are cheaper than polishing B to tolerance while A is stale, and
# every pass is monotone regardless
_MIXING_PASS_ITERS = 25


@dataclass(frozen=True)
class AAConfig:
    """Outer-loop configuration for :func:`fit_aa`.

    ``init`` selects the starting mixing matrix: greedily selected extreme
    points (``sivm``, default), uniformly random distinct data columns
    (``random``), or the uniform matrix (``uniform``).
    """

    k: int
    max_outer_iters: int = 500
    outer_tol: float = 1e-6
    init: str = "sivm"
    seed: int = 0
    inner: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got k={self.k}")
        if self.max_outer_iters < 1:
            raise ValueError(f"max_outer_iters must be >= 1, got {self.max_outer_iters}")
        if self.outer_tol <= 0:
            raise ValueError(f"outer_tol must be positive, got {self.outer_tol}")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")


def _initial_mixing(X: np.ndarray, cfg: AAConfig) -> np.ndarray:
    n = X.shape[1]
    if cfg.init == "sivm":
        return indicator_mixing(n, select_sivm(X, cfg.k, cfg.seed).indices)
    if cfg.init == "random":
        rng = np.random.default_rng(cfg.seed)
        picks = rng.choice(n, size=cfg.k, replace=False)
        return indicator_mixing(n, [int(p) for p in picks])
    return np.full((n, cfg.k), 1.0 / n)


def _update_mixing(
    X: np.ndarray, XtX: np.ndarray, B: np.ndarray, A: np.ndarray, inner: SolverConfig
) -> np.ndarray:
    """Projected-gradient pass on B with A fixed."""
    AAt = A @ A.T
    # top eigenvalue of the lifted Hessian action M -> XtX M AAt by power
    # iteration in matrix shape (Frobenius-normalized); ramp start avoids
    # landing in the null space for centered data
    M = np.arange(1.0, B.size + 1.0).reshape(B.shape)
    M /= np.linalg.norm(M)
    lam = 0.0
    for _ in range(inner.power_iters):
        W = XtX @ M @ AAt
        norm = np.linalg.norm(W)
        if norm <= 0.0:
            break
        lam_new = float(np.sum(M * W))
        M = W / norm
        if abs(lam_new - lam) <= inner.power_tol * abs(lam_new):
            lam = lam_new
            break
        lam = lam_new
    if lam <= 0.0:
        lam = float(np.trace(XtX)) * float(np.trace(AAt))
        if lam <= 0.0:
            return B
    step = 1.0 / (_STEP_SAFETY * lam)

    XtXAt = XtX @ A.T
    R = X - X @ B @ A
    obj = float(np.sum(R * R))
    for _ in range(min(inner.max_inner_iters, _MIXING_PASS_ITERS)):
        grad_half = XtX @ B @ AAt - XtXAt
        candidate = project_columns_to_simplex(B - step * grad_half)
        if __debug__:
            assert candidate.min() >= 0.0
            assert np.allclose(candidate.sum(axis=0), 1.0, atol=1e-10)
        R = X - X @ candidate @ A
        obj_new = float(np.sum(R * R))
        if obj_new > obj:
            break
        B = candidate
        if obj - obj_new < inner.tol * obj + _STOP_FLOOR:
            obj = obj_new
            break
        obj = obj_new
    return B


def fit_aa(X, cfg: AAConfig) -> Factorization:
    """Fit column stochastic factors minimizing ‖X - X B A‖².

    Deterministic for a fixed (X, cfg, seed).  The residual history holds
    one entry per outer iteration (entry 0 is the post-initialization
    residual) and is non-increasing; ``converged`` is False when the
    iteration cap was hit instead of the relative-decrease threshold.
    """
    X = as_matrix(X, "X")
    n = X.shape[1]
    if cfg.k > n:
        raise ValueError(f"k={cfg.k} exceeds the number of data columns n={n}")

    B = _initial_mixing(X, cfg)
    return _alternate(X, B, cfg, meta={"method": "aa", "init": cfg.init, "seed": cfg.seed})


def fit_aa_on_vertices(V, k: int, cfg: AAConfig | None = None) -> Factorization:
    """:func:`fit_aa` specialization for a matrix of hull vertices.

    Fitting on the q hull vertices instead of all n points is the cheap
    first stage of the two-stage pipeline; recover coefficients for the
    remaining points afterwards with :func:`transform`.
    """
    cfg = replace(cfg, k=k) if cfg is not None else AAConfig(k=k)
    return fit_aa(V, cfg)


def _alternate(X: np.ndarray, B: np.ndarray, cfg: AAConfig, meta: dict) -> Factorization:
    XtX = X.T @ X
    A = solve_simplex_ls_batch(X @ B, X, cfg.inner)
    rss = _rss(X, B, A)
    history = [rss]

    converged = False
    iterations = 0
    for _ in range(cfg.max_outer_iters):
        B = _update_mixing(X, XtX, B, A, cfg.inner)
        A = solve_simplex_ls_batch(X @ B, X, cfg.inner, warm=A)
        rss_new = _rss(X, B, A)
        iterations += 1
        history.append(rss_new)
        if rss - rss_new < cfg.outer_tol * rss + _STOP_FLOOR:
            rss = rss_new
            converged = True
            break
        rss = rss_new

    return Factorization(
        B=B,
        A=A,
        Z=X @ B,
        rss=history[-1],
        rss_history=tuple(history),
        iterations=iterations,
        converged=converged,
        meta=dict(meta, k=cfg.k),
    )


def _rss(X: np.ndarray, B: np.ndarray, A: np.ndarray) -> float:
    R = X - X @ B @ A
    return float(np.sum(R * R))


def transform(Z, X, inner: SolverConfig | None = None) -> np.ndarray:
    """Coefficients for arbitrary points against fixed archetypes ``Z``."""
    return solve_simplex_ls_batch(Z, X, inner)


def nested_k_sweep(X, ks, cfg: AAConfig) -> list[Factorization]:
    """Fits over increasing k, each seeded with the previous archetypes.

    The k+1 run starts from the k run's mixing matrix plus one extra
    indicator column at the data point farthest (by summed distance) from
    the current archetypes, so the residual can only go down along the
    sweep.
    """
    X = as_matrix(X, "X")
    ks = sorted(set(int(k) for k in ks))
    if not ks:
        raise ValueError("need at least one k")
    results: list[Factorization] = []
    B_prev: np.ndarray | None = None
    for k in ks:
        if B_prev is None or k <= B_prev.shape[1]:
            B0 = _initial_mixing(X, replace(cfg, k=k))
        else:
            B0 = B_prev
            while B0.shape[1] < k:
                B0 = np.hstack([B0, _furthest_extra_column(X, X @ B0)])
        fact = _alternate(
            X, B0, replace(cfg, k=k), meta={"method": "aa", "init": "nested", "seed": cfg.seed}
        )
        results.append(fact)
        B_prev = np.asarray(fact.B)
    return results


def _furthest_extra_column(X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Indicator column at the data point with maximal summed distance to Z."""
    n = X.shape[1]
    sum_dist = np.zeros(n)
    for j in range(Z.shape[1]):
        sum_dist += np.linalg.norm(X - Z[:, [j]], axis=0)
    pick = int(np.argmax(sum_dist))
    col = np.zeros((n, 1))
    col[pick, 0] = 1.0
    return col
