"""Exact 2-D convex-hull vertices and a dimension-agnostic extremality oracle.

The hull keeps strict vertices only: points on the interior of an edge are
convex combinations of the endpoints and therefore not extreme.  In higher
dimensions facet enumeration is deliberately out of scope; per-point
extremality via a constrained least-squares residual is the sanctioned
(O(n) solves) fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver import SolverConfig, gram_max_eigenvalue, solve_simplex_ls
from .types import as_matrix

# cross products below this fraction of the squared coordinate scale count
# as collinear, so edge-interior points are dropped
_COLLINEAR_RTOL = 1e-12


@dataclass(frozen=True)
class HullResult:
    """Counter-clockwise hull vertex indices, starting from the
    lexicographically smallest point."""

    vertex_indices: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.vertex_indices)


def convex_hull_2d(points) -> HullResult:
    """Monotone-chain hull of a 2 x n point matrix (columns are points).

    Duplicate points are deduplicated first; collinear boundary points are
    excluded so every returned index is a strict vertex.
    """
    P = as_matrix(points, "points")
    if P.shape[0] != 2:
        raise ValueError(f"hull extraction needs 2-D points, got {P.shape[0]} rows")
    n = P.shape[1]

    seen: dict[tuple[float, float], int] = {}
    for i in range(n):
        key = (float(P[0, i]), float(P[1, i]))
        if key not in seen:
            seen[key] = i
    order = sorted(seen.items())  # lexicographic by (x, y)
    idx = [i for _, i in order]

    if len(idx) == 1:
        return HullResult(vertex_indices=(idx[0],))

    scale = max(float(np.max(np.abs(P))), 1.0)
    eps = _COLLINEAR_RTOL * scale * scale

    def cross(o: int, a: int, b: int) -> float:
        return (P[0, a] - P[0, o]) * (P[1, b] - P[1, o]) - (P[1, a] - P[1, o]) * (
            P[0, b] - P[0, o]
        )

    lower: list[int] = []
    for i in idx:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= eps:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(idx):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= eps:
            upper.pop()
        upper.append(i)

    hull = lower[:-1] + upper[:-1]
    return HullResult(vertex_indices=tuple(hull))


def extremality_test(X, i: int, tol: float = 1e-10, cfg: SolverConfig | None = None) -> bool:
    """True when column i cannot be written as a convex combination of the rest.

    Brute-force oracle: solves the simplex-constrained least-squares fit of
    x_i against all other columns and compares the residual to ``tol``.
    Works in any dimension.  Because the projected-gradient tail can crawl
    for points barely inside the hull, a membership certificate (an exact
    feasible representation reached by affine correction of the current
    coefficients) is attempted before declaring a point extreme; the
    certificate's residual can never undercut the true optimum, so it can
    only rescue slow interior cases, never misclassify a vertex.
    """
    X = as_matrix(X, "X")
    n = X.shape[1]
    if n < 2:
        raise ValueError("extremality needs at least 2 points")
    if not 0 <= i < n:
        raise IndexError(f"point index {i} out of range for n={n}")
    if cfg is None:
        cfg = SolverConfig(max_inner_iters=30000, tol=1e-12)
    others = np.delete(X, i, axis=1)
    x = X[:, i]

    a = None
    first = min(2000, cfg.max_inner_iters)
    for budget in (first, cfg.max_inner_iters - first):
        if budget < 1:
            continue
        round_cfg = SolverConfig(
            max_inner_iters=budget,
            tol=cfg.tol,
            power_iters=cfg.power_iters,
            power_tol=cfg.power_tol,
        )
        a = solve_simplex_ls(others, x, round_cfg, warm_start=a)
        r = others @ a - x
        if float(r @ r) <= tol:
            return False
        if _membership_certificate(others, x, a) is not None:
            return False
    return True


def _membership_certificate(Z, x, a, feas_tol=1e-11, resid_tol=1e-12, max_drops=64):
    """Exact feasible representation of x over Z's columns, or None.

    Solves the sum-one least-squares system restricted to the support of
    the current iterate, dropping the most negative coordinate until the
    solution is non-negative (an active-set polish seeded by the solver's
    support).  Accepted only when the polished point reproduces x to
    within ``resid_tol``; any accepted point witnesses that the true
    constrained optimum is at most ``resid_tol``, so a genuinely extreme
    point can never be certified.
    """
    support = np.flatnonzero(a > 1e-10)
    target = np.concatenate([x, [1.0]])
    for _ in range(max_drops):
        if support.size == 0:
            return None
        C = np.vstack([Z[:, support], np.ones((1, support.size))])
        sol, *_ = np.linalg.lstsq(C, target, rcond=None)
        if sol.min() >= -feas_tol:
            cand = np.zeros(Z.shape[1])
            cand[support] = np.maximum(sol, 0.0)
            total = cand.sum()
            if total <= 0.0:
                return None
            cand /= total
            r = Z @ cand - x
            if float(r @ r) > resid_tol:
                return None
            return cand
        support = np.delete(support, int(np.argmin(sol)))
    return None


def extremality_residuals(
    X, max_iters: int = 16000, stall_tol: float = 1e-9, floor: float = 1e-12
) -> np.ndarray:
    """Self-reconstruction residual of every column against all others.

    Batched form of the minimization behind :func:`extremality_test`: one
    projected-gradient sweep advances all columns together, each against
    the full matrix with its own coordinate banned (held at zero by the
    projection).  A column freezes once its residual falls below ``floor``
    (decidedly interior) or its per-step decrease stalls; columns still
    above the floor afterwards get a membership-certificate attempt so
    slow interior cases are not misread as extreme.  Point i is extreme
    iff ``result[i] > tol`` for the caller's tolerance, matching
    per-point calls.
    """
    X = as_matrix(X, "X")
    n = X.shape[1]
    if n < 2:
        raise ValueError("extremality needs at least 2 points")
    lam = gram_max_eigenvalue(X.T @ X)
    if lam <= 0.0:  # all points coincide at the origin: nothing is extreme
        return np.zeros(n)
    step = 1.0 / (1.01 * lam)

    A = np.full((n, n), 1.0 / (n - 1))
    np.fill_diagonal(A, 0.0)
    residual = X @ A - X
    obj = np.einsum("ij,ij->j", residual, residual)
    active = np.arange(n)

    for _ in range(max_iters):
        if active.size == 0:
            break
        grad_half = X.T @ residual[:, active]
        candidate = A[:, active] - step * grad_half
        candidate[active, np.arange(active.size)] = -np.inf
        candidate = _project_columns_shortened(candidate)
        res_new = X @ candidate - X[:, active]
        obj_new = np.einsum("ij,ij->j", res_new, res_new)

        improved = obj_new <= obj[active]
        take = active[improved]
        A[:, take] = candidate[:, improved]
        residual[:, take] = res_new[:, improved]

        decrease = obj[active] - obj_new
        done = (
            (decrease < stall_tol * obj[active] + 1e-18)
            | ~improved
            | (obj_new <= floor)
        )
        obj[take] = obj_new[improved]
        active = active[~done]

    for i in np.flatnonzero(obj > floor):
        others = np.delete(X, i, axis=1)
        coeffs = np.delete(A[:, i], i)
        cert = _membership_certificate(others, X[:, i], coeffs)
        if cert is not None:
            r = others @ cert - X[:, i]
            obj[i] = float(r @ r)

    return obj


def _project_columns_shortened(V: np.ndarray) -> np.ndarray:
    """Column simplex projection where one -inf sentinel per column marks a
    banned coordinate (it projects to exactly zero)."""
    q = V.shape[0] - 1  # effective length excludes the sentinel
    s = np.sort(V, axis=0)[::-1][:q]
    cumsum = np.cumsum(s, axis=0)
    j = np.arange(1, q + 1)[:, None]
    candidate = (cumsum - 1.0) / j
    mask = s > candidate
    rho = q - 1 - np.argmax(mask[::-1], axis=0)
    tau = candidate[rho, np.arange(V.shape[1])]
    out = V - tau[None, :]
    np.maximum(out, 0.0, out=out)
    return out
