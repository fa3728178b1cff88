"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail
line per criterion (the prints surface with ``-s``; outcomes are enforced
by the asserts either way).
"""

import itertools
import json
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from aakit.aa import AAConfig, fit_aa, nested_k_sweep
from aakit.cli import main
from aakit.datasets import hexagon_with_interior, make_ring
from aakit.hull import convex_hull_2d, extremality_residuals, extremality_test
from aakit.identity import (
    certify,
    frobenius_gap,
    rank_lower_bound,
    relative_accuracy,
    sivm_identity_error,
    worst_case_bound,
)
from aakit.io import write_matrix_csv
from aakit.solver import (
    SolverConfig,
    simplex_ls_gradient,
    simplex_ls_objective,
    solve_simplex_ls,
)
from aakit.types import frobenius_sq

# every factorization produced while the suite runs; criterion 9 re-checks
# all of their residual histories
ALL_FITS = []


@contextmanager
def criterion(number, name, budget_s=None):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {number:>2} {name}: FAIL")
        raise
    elapsed = time.perf_counter() - start
    assert budget_s is None or elapsed < budget_s, (
        f"criterion {number} exceeded its {budget_s}s budget: {elapsed:.1f}s"
    )
    print(f"ACCEPTANCE {number:>2} {name}: PASS ({elapsed:.2f}s)")


def monotone(history, slack=1e-12):
    return all(later <= earlier + slack for earlier, later in zip(history, history[1:]))


def test_criterion_1_identity_certificates_closed_forms():
    with criterion(1, "identity certificates (exact closed forms)", budget_s=10.0):
        for q in range(2, 51):
            for k in range(1, q):
                assert certify(q, k, "sivm").abs_gap <= 1e-8
                assert certify(q, k, "partition").abs_gap <= 1e-8
            assert certify(q, 1, "centroid").abs_gap <= 1e-8


def _random_pairs(trials, seed):
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        q = int(rng.integers(2, 21))
        k = int(rng.integers(1, q))
        B = rng.dirichlet(np.ones(q), size=k).T
        A = rng.dirichlet(np.ones(k), size=q).T
        yield q, k, frobenius_gap(B, A)


def test_criterion_2_and_3_random_sampling_bounds():
    with criterion(2, "worst-case and positivity sampling", budget_s=30.0):
        samples = list(_random_pairs(10_000, seed=2024))
        for q, k, gap in samples:
            assert 0.0 < gap <= worst_case_bound(q)
    with criterion(3, "rank lower bound on the same samples"):
        for q, k, gap in samples:
            assert gap >= rank_lower_bound(q, k) - 1e-8


def test_criterion_4_relative_accuracy_curve(capsys):
    with criterion(4, "relative-accuracy curve"):
        for k in range(1, 101):
            assert relative_accuracy(k) == k / (k + 1)
        assert relative_accuracy(10) == 10 / 11 > 0.90
        assert main(["bounds", "--q", "20", "--k", "5", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        curve = payload["relative_accuracy_curve"]
        assert [c["k"] for c in curve] == list(range(1, 51))
        assert all(c["ratio"] == c["k"] / (c["k"] + 1) for c in curve)


def test_criterion_5_sivm_end_to_end_identity_files(tmp_path, capsys):
    with criterion(5, "sivm end-to-end on identity data", budget_s=20.0):
        for q in (5, 10, 20):
            data = tmp_path / f"I{q}.csv"
            write_matrix_csv(np.eye(q), data, "points-as-rows")
            for k in range(2, q):
                prefix = tmp_path / f"run_{q}_{k}"
                code = main(
                    [
                        "sivm",
                        "--input",
                        str(data),
                        "--k",
                        str(k),
                        "--out-prefix",
                        str(prefix),
                    ]
                )
                capsys.readouterr()
                assert code == 0
                report = json.loads((tmp_path / f"run_{q}_{k}.report.json").read_text())
                assert report["rss"] == pytest.approx(
                    sivm_identity_error(q, k), abs=1e-6
                )


def test_criterion_6_vertex_recovery(capsys):
    with criterion(6, "vertex recovery on separated 2-D hull", budget_s=30.0):
        X, V = hexagon_with_interior(200, seed=7)
        fact = fit_aa(X, AAConfig(k=6, seed=0))
        ALL_FITS.append(fact)
        Z = np.asarray(fact.Z)
        mismatch = min(
            max(np.linalg.norm(Z[:, list(p)] - V, axis=0))
            for p in itertools.permutations(range(6))
        )
        assert mismatch <= 1e-3
        assert fact.rss / frobenius_sq(X) < 1e-6


def test_criterion_7_inner_solver_oracle():
    with criterion(7, "inner-solver grid oracle and gradient check"):
        rng = np.random.default_rng(77)
        oracle_cfg = SolverConfig(max_inner_iters=5000)
        checked_grad = 0
        for _ in range(200):
            k = int(rng.integers(1, 4))
            m = int(rng.integers(1, 6))
            Z = rng.normal(size=(m, k)) * 2.0
            x = rng.normal(size=m) * 2.0
            a = solve_simplex_ls(Z, x, oracle_cfg)
            solved = simplex_ls_objective(Z, a, x)
            assert solved <= _grid_min(Z, x) + 1e-3

            if k >= 2:
                point = rng.dirichlet(np.ones(k))
                grad = simplex_ls_gradient(Z, point, x)
                fd = np.empty(k)
                h = 1e-6
                for i in range(k):
                    e = np.zeros(k)
                    e[i] = h
                    fd[i] = (
                        simplex_ls_objective(Z, point + e, x)
                        - simplex_ls_objective(Z, point - e, x)
                    ) / (2 * h)
                denom = max(np.linalg.norm(grad), 1e-8)
                assert np.linalg.norm(grad - fd) / denom <= 1e-4
                checked_grad += 1
        assert checked_grad > 50


def _grid_min(Z, x, step=1e-2):
    k = Z.shape[1]
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    if k == 1:
        return simplex_ls_objective(Z, np.array([1.0]), x)
    if k == 2:
        grid = np.vstack([ticks, 1.0 - ticks])
    else:
        cols = [
            (t1, t2, 1.0 - t1 - t2)
            for t1 in ticks
            for t2 in np.arange(0.0, 1.0 - t1 + step / 2, step)
        ]
        grid = np.array(cols).T
    residuals = Z @ grid - x[:, None]
    return float(np.min(np.einsum("ij,ij->j", residuals, residuals)))


def test_criterion_8_hull_oracle_agreement():
    with criterion(8, "hull vs extremality oracle agreement"):
        rng = np.random.default_rng(88)
        for instance in range(50):
            n = 100 if instance < 2 else int(rng.integers(6, 61))
            if instance % 2 == 0:
                X = rng.uniform(-1.0, 1.0, size=(2, n))
            else:
                X = rng.normal(size=(2, n))
            hull_set = set(convex_hull_2d(X).vertex_indices)
            residuals = extremality_residuals(X)
            oracle_set = {i for i in range(n) if residuals[i] > 1e-10}
            assert hull_set == oracle_set, f"instance {instance}: {hull_set ^ oracle_set}"
            # tie the batched scan to the per-point oracle on a sample
            for i in rng.choice(n, size=3, replace=False):
                assert extremality_test(X, int(i), tol=1e-10) == (int(i) in oracle_set)


def test_criterion_9_monotone_descent_and_nested_ks():
    with criterion(9, "monotone descent and nested-k improvement"):
        X = make_ring(200, seed=0)
        sweep = nested_k_sweep(X, range(3, 11), AAConfig(k=3, seed=0))
        ALL_FITS.extend(sweep)
        rss = [f.rss for f in sweep]
        for earlier, later in zip(rss, rss[1:]):
            assert later <= earlier + 1e-9
        for fact in ALL_FITS:
            assert monotone(fact.rss_history)


def test_criterion_10_verify_determinism(tmp_path):
    with criterion(10, "verify report determinism"):
        outputs = []
        for run in (1, 2):
            report = tmp_path / f"verify{run}.json"
            proc = subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "aakit",
                    "verify",
                    "--seed",
                    "7",
                    "--json",
                    str(report),
                ],
                capture_output=True,
                check=True,
            )
            outputs.append((proc.stdout, report.read_bytes()))
        assert outputs[0][0] == outputs[1][0]
        assert outputs[0][1] == outputs[1][1]
        assert b"RESULT: PASS" in outputs[0][0]
