import numpy as np
import pytest

from aakit.simplex import project_to_simplex
from aakit.solver import (
    SolverConfig,
    gram_max_eigenvalue,
    simplex_ls_gradient,
    simplex_ls_objective,
    solve_simplex_ls,
    solve_simplex_ls_batch,
)
from aakit.types import ShapeError


def brute_force_simplex_min(Z, x, step=1e-2):
    """Grid search over the simplex; independent oracle for small k."""
    k = Z.shape[1]
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    best = np.inf
    if k == 1:
        return simplex_ls_objective(Z, np.array([1.0]), x)
    if k == 2:
        for t in ticks:
            best = min(best, simplex_ls_objective(Z, np.array([t, 1 - t]), x))
        return best
    if k == 3:
        for t1 in ticks:
            for t2 in np.arange(0.0, 1.0 - t1 + step / 2, step):
                a = np.array([t1, t2, 1.0 - t1 - t2])
                best = min(best, simplex_ls_objective(Z, a, x))
        return best
    raise ValueError("oracle only covers k <= 3")


ORACLE_CFG = SolverConfig(max_inner_iters=5000)


class TestSolveSimplexLs:
    def test_interpolates_vertex_exactly(self):
        rng = np.random.default_rng(1)
        Z = rng.normal(size=(4, 3))
        for j in range(3):
            a = solve_simplex_ls(Z, Z[:, j], ORACLE_CFG)
            np.testing.assert_allclose(a, np.eye(3)[:, j], atol=1e-8)
            assert simplex_ls_objective(Z, a, Z[:, j]) <= 1e-15

    def test_identity_basis_uniform_target(self):
        a = solve_simplex_ls(np.eye(3), np.array([0.5, 0.5, 0.5]))
        expected = project_to_simplex([0.5, 0.5, 0.5])
        np.testing.assert_allclose(a, expected, atol=1e-10)
        resid = simplex_ls_objective(np.eye(3), a, np.array([0.5, 0.5, 0.5]))
        # grid oracle at step 1e-3 brackets the optimum 1/12
        assert resid == pytest.approx(1.0 / 12.0, abs=1e-9)

    def test_unreachable_vertex_gives_subsimplex_height(self):
        Z = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        x = np.array([0.0, 0.0, 1.0])
        a = solve_simplex_ls(Z, x)
        np.testing.assert_allclose(a, [0.5, 0.5], atol=1e-10)
        assert simplex_ls_objective(Z, a, x) == pytest.approx(1.5, abs=1e-12)

    def test_matches_grid_oracle_small_k(self):
        rng = np.random.default_rng(7)
        for trial in range(200):
            k = int(rng.integers(1, 4))
            m = int(rng.integers(1, 6))
            Z = rng.normal(size=(m, k)) * 2.0
            x = rng.normal(size=m) * 2.0
            a = solve_simplex_ls(Z, x, ORACLE_CFG)
            solved = simplex_ls_objective(Z, a, x)
            oracle = brute_force_simplex_min(Z, x)
            assert solved <= oracle + 1e-3

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        h = 1e-6
        for _ in range(50):
            k = int(rng.integers(2, 6))
            m = int(rng.integers(2, 6))
            Z = rng.normal(size=(m, k))
            x = rng.normal(size=m)
            a = rng.dirichlet(np.ones(k))
            grad = simplex_ls_gradient(Z, a, x)
            fd = np.empty(k)
            for i in range(k):
                e = np.zeros(k)
                e[i] = h
                fd[i] = (
                    simplex_ls_objective(Z, a + e, x) - simplex_ls_objective(Z, a - e, x)
                ) / (2 * h)
            scale = max(np.linalg.norm(grad), 1e-8)
            assert np.linalg.norm(grad - fd) / scale <= 1e-4

    def test_warm_start_used(self):
        Z = np.eye(4)
        x = np.eye(4)[:, 2]
        a = solve_simplex_ls(Z, x, warm_start=np.eye(4)[:, 2])
        np.testing.assert_array_equal(a, np.eye(4)[:, 2])

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            solve_simplex_ls(np.eye(3), np.zeros(4))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            solve_simplex_ls(np.eye(2), np.array([np.inf, 0.0]))

    def test_monotone_descent_trace(self):
        # re-run the iteration manually and confirm the objective never rises
        rng = np.random.default_rng(9)
        Z = rng.normal(size=(5, 4))
        x = rng.normal(size=5)
        cfg = SolverConfig(max_inner_iters=100)
        lam = gram_max_eigenvalue(Z.T @ Z)
        step = 1.0 / (1.01 * lam)
        a = np.full(4, 0.25)
        prev = simplex_ls_objective(Z, a, x)
        for _ in range(100):
            a = project_to_simplex(a - step * (Z.T @ (Z @ a - x)))
            cur = simplex_ls_objective(Z, a, x)
            assert cur <= prev + 1e-12
            prev = cur
        solved = solve_simplex_ls(Z, x, cfg)
        assert simplex_ls_objective(Z, solved, x) <= prev + 1e-9


class TestBatch:
    def test_self_reconstruction_is_identity(self):
        rng = np.random.default_rng(2)
        Z = rng.normal(size=(5, 4))
        A = solve_simplex_ls_batch(Z, Z, ORACLE_CFG)
        np.testing.assert_allclose(A, np.eye(4), atol=1e-8)

    def test_identity_data_with_vertex_basis(self):
        q, k = 6, 3
        Z = np.eye(q)[:, :k]
        A = solve_simplex_ls_batch(Z, np.eye(q))
        np.testing.assert_allclose(A[:, :k], np.eye(k), atol=1e-10)
        np.testing.assert_allclose(A[:, k:], np.full((k, q - k), 1.0 / k), atol=1e-10)

    def test_batch_of_one_matches_single(self):
        rng = np.random.default_rng(4)
        Z = rng.normal(size=(4, 3))
        x = rng.normal(size=4)
        np.testing.assert_array_equal(
            solve_simplex_ls_batch(Z, x[:, None])[:, 0], solve_simplex_ls(Z, x)
        )

    def test_columns_independent_of_batching(self):
        # solving jointly or column-by-column must agree: no cross-column state
        rng = np.random.default_rng(6)
        Z = rng.normal(size=(3, 4))
        X = rng.normal(size=(3, 7))
        joint = solve_simplex_ls_batch(Z, X)
        for j in range(7):
            np.testing.assert_allclose(joint[:, j], solve_simplex_ls(Z, X[:, j]), atol=1e-12)

    def test_zero_basis_returns_feasible(self):
        A = solve_simplex_ls_batch(np.zeros((3, 2)), np.ones((3, 2)))
        np.testing.assert_allclose(A.sum(axis=0), 1.0, atol=1e-12)


class TestSolverConfig:
    def test_rejects_bad_iters(self):
        with pytest.raises(ValueError):
            SolverConfig(max_inner_iters=0)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            SolverConfig(tol=0.0)


class TestGramMaxEigenvalue:
    def test_diagonal(self):
        assert gram_max_eigenvalue(np.diag([1.0, 5.0, 2.0])) == pytest.approx(5.0, rel=1e-6)

    def test_never_underestimates_much(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            M = rng.normal(size=(5, 5))
            G = M.T @ M
            true = float(np.linalg.eigvalsh(G)[-1])
            est = gram_max_eigenvalue(G)
            assert est * 1.01 >= true * (1 - 1e-6)
            assert est <= np.trace(G) + 1e-12

    def test_zero_matrix(self):
        assert gram_max_eigenvalue(np.zeros((3, 3))) == 0.0
