import numpy as np
import pytest

from aakit.aa import AAConfig, fit_aa
from aakit.hull import extremality_test
from aakit.sivm import indicator_mixing, select_sivm, sivm_factorization
from aakit.sivm import SelectionResult
from aakit.types import is_column_stochastic


class TestSelect:
    def test_square_corners_beat_interior(self):
        X = np.array(
            [[-1.0, 1.0, 1.0, -1.0, 0.0, 0.2], [-1.0, -1.0, 1.0, 1.0, 0.0, -0.1]]
        )
        sel = select_sivm(X, 4)
        assert sorted(sel.indices) == [0, 1, 2, 3]

    def test_exhaustive_pair_check(self):
        # the greedy pair must be the max-distance pair of this small set
        X = np.array([[0.0, 1.0, 0.5, 0.5], [0.0, 0.0, 0.1, 0.05]])
        sel = select_sivm(X, 2)
        pairs = {
            (i, j): np.linalg.norm(X[:, i] - X[:, j])
            for i in range(4)
            for j in range(i + 1, 4)
        }
        best_pair = max(pairs, key=pairs.get)
        assert set(sel.indices) == set(best_pair)

    def test_single_pick_is_farthest_from_centroid(self):
        X = np.array([[0.0, 0.0, 10.0], [0.0, 1.0, 0.0]])
        sel = select_sivm(X, 1)
        assert sel.indices == (2,)
        assert len(sel.selection_scores) == 1

    def test_selects_all_when_k_equals_n(self):
        X = np.random.default_rng(0).normal(size=(3, 5))
        sel = select_sivm(X, 5)
        assert sorted(sel.indices) == [0, 1, 2, 3, 4]

    def test_deterministic(self):
        X = np.random.default_rng(1).normal(size=(2, 40))
        assert select_sivm(X, 6) == select_sivm(X, 6)
        assert isinstance(select_sivm(X, 6), SelectionResult)

    def test_invalid_k(self):
        X = np.eye(3)
        with pytest.raises(ValueError):
            select_sivm(X, 0)
        with pytest.raises(ValueError):
            select_sivm(X, 4)

    def test_selected_points_are_extreme(self):
        rng = np.random.default_rng(2)
        corners = np.array([[0.0, 4.0, 4.0, 0.0], [0.0, 0.0, 4.0, 4.0]])
        interior = rng.uniform(0.5, 3.5, size=(2, 30))
        X = np.hstack([corners, interior])
        sel = select_sivm(X, 4)
        for idx in sel.indices:
            assert extremality_test(X, idx, tol=1e-6)


class TestIndicatorMixing:
    def test_columns_are_indicators(self):
        B = indicator_mixing(5, [2, 0])
        assert B.shape == (5, 2)
        np.testing.assert_array_equal(B[:, 0], [0, 0, 1, 0, 0])
        np.testing.assert_array_equal(B[:, 1], [1, 0, 0, 0, 0])


class TestFactorization:
    @pytest.mark.parametrize("q,k", [(6, 2), (6, 5), (10, 3), (10, 9), (15, 7)])
    def test_identity_data_matches_closed_form(self, q, k):
        fact = sivm_factorization(np.eye(q), k)
        expected = (q - k) * (k + 1) / k
        assert fact.rss == pytest.approx(expected, abs=1e-8)

    def test_identity_data_full_rank_is_exact(self):
        fact = sivm_factorization(np.eye(7), 7)
        assert fact.rss <= 1e-12

    def test_closed_form_sweep(self):
        for q in range(2, 31):
            X = np.eye(q)
            for k in range(1, q):
                fact = sivm_factorization(X, k)
                assert fact.rss == pytest.approx((q - k) * (k + 1) / k, abs=1e-8)

    def test_vertices_reconstruct_interior_residual_only(self):
        rng = np.random.default_rng(3)
        V = np.array([[0.0, 4.0, 2.0], [0.0, 0.0, 3.0]])
        interior = V @ rng.dirichlet(np.ones(3) * 3, size=20).T
        X = np.hstack([V, interior])
        fact = sivm_factorization(X, 3)
        assert sorted(fact.meta["selected_indices"]) == [0, 1, 2]
        # triangle vertices span everything: residual is solver noise only
        assert fact.rss <= 1e-10

    def test_factors_stochastic_and_indicator(self):
        X = np.random.default_rng(4).normal(size=(3, 12))
        fact = sivm_factorization(X, 4)
        B = np.asarray(fact.B)
        assert is_column_stochastic(B)
        assert is_column_stochastic(fact.A)
        assert np.all(B.sum(axis=0) == 1.0)
        assert np.all((B == 0.0) | (B == 1.0))

    def test_greedy_never_beats_full_fit(self):
        X = np.random.default_rng(5).normal(size=(2, 25))
        k = 4
        greedy = sivm_factorization(X, k)
        full = fit_aa(X, AAConfig(k=k, seed=0))
        assert greedy.rss >= full.rss - 1e-6
