"""The certificate suite: every closed-form bound checked numerically.

Each check builds its own evidence (exhaustive sweeps of the exact
constructions, random stochastic sampling, an end-to-end greedy run on
identity data) and reports a :class:`CheckResult`.  The CLI ``verify``
subcommand prints one line per check and fails the process when any check
fails; the full per-construction certificate list is available for the
JSON report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import identity
from .sivm import sivm_factorization
from .solver import SolverConfig

CERT_TOL = identity.CERT_TOL


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    certificates: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def check_closed_forms(qmax: int, break_one: bool = False) -> list[CheckResult]:
    """Exhaustive certificates for all three constructions, 1 <= k < q <= qmax.

    ``break_one`` deliberately corrupts a single certificate (self-test of
    the harness: the suite must then fail).
    """
    by_kind: dict[str, list[identity.IdentityApproxCertificate]] = {
        "sivm": [],
        "partition": [],
        "centroid": [],
    }
    for q in range(2, qmax + 1):
        for k in range(1, q):
            by_kind["sivm"].append(identity.certify(q, k, "sivm"))
            by_kind["partition"].append(identity.certify(q, k, "partition"))
        by_kind["centroid"].append(identity.certify(q, 1, "centroid"))

    if break_one:
        broken = by_kind["sivm"][0]
        by_kind["sivm"][0] = identity.IdentityApproxCertificate(
            q=broken.q,
            k=broken.k,
            kind=broken.kind,
            partition=broken.partition,
            predicted_error=broken.predicted_error,
            measured_error=broken.measured_error + 1e-4,
            abs_gap=broken.abs_gap + 1e-4,
            passed=False,
        )

    results = []
    labels = {
        "sivm": "identity-sivm-closed-form",
        "partition": "identity-partition-closed-form",
        "centroid": "identity-centroid-closed-form",
    }
    for kind, certs in by_kind.items():
        worst = max(c.abs_gap for c in certs)
        ok = all(c.passed for c in certs)
        results.append(
            CheckResult(
                name=labels[kind],
                passed=ok,
                detail=f"{len(certs)} certificates, q<={qmax}, max_abs_gap={_fmt(worst)}",
                certificates=certs,
            )
        )
    return results


def _random_stochastic(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.dirichlet(np.ones(rows), size=cols).T


def check_random_sampling(trials: int, seed: int) -> list[CheckResult]:
    """Random stochastic factor pairs against the three universal facts:

    the gap is strictly positive (a perfect low-rank stochastic
    approximation of the identity is impossible), never exceeds 2q, and
    never goes below the rank lower bound q - k.
    """
    rng = np.random.default_rng(seed)
    min_gap = np.inf
    max_excess = -np.inf  # gap - 2q, must stay <= 0
    min_margin = np.inf  # gap - (q - k), must stay >= -tol
    for _ in range(trials):
        q = int(rng.integers(2, 21))
        k = int(rng.integers(1, q))
        B = _random_stochastic(rng, q, k)
        A = _random_stochastic(rng, k, q)
        gap = identity.frobenius_gap(B, A)
        min_gap = min(min_gap, gap)
        max_excess = max(max_excess, gap - identity.worst_case_bound(q))
        min_margin = min(min_margin, gap - identity.rank_lower_bound(q, k))
    return [
        CheckResult(
            name="positivity-sampling",
            passed=bool(min_gap > 0.0),
            detail=f"{trials} pairs, min_gap={_fmt(min_gap)}",
        ),
        CheckResult(
            name="worst-case-bound-sampling",
            passed=bool(max_excess <= 0.0),
            detail=f"{trials} pairs, max(gap - 2q)={_fmt(max_excess)}",
        ),
        CheckResult(
            name="rank-lower-bound-sampling",
            passed=bool(min_margin >= -CERT_TOL),
            detail=f"{trials} pairs, min(gap - (q-k))={_fmt(min_margin)}",
        ),
    ]


def check_product_transport(seed: int, trials: int = 50) -> CheckResult:
    """Submultiplicativity transport: ‖V(I-BA)‖² <= ‖V‖² · ‖I-BA‖²."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        q = int(rng.integers(2, 15))
        k = int(rng.integers(1, q))
        m = int(rng.integers(2, 8))
        V = rng.normal(size=(m, q))
        for B, A in (
            identity.sivm_identity_factors(q, k),
            identity.partition_identity_factors(q, identity.balanced_partition(q, k)),
            (_random_stochastic(rng, q, k), _random_stochastic(rng, k, q)),
        ):
            E = V - V @ B @ A
            lhs = float(np.sum(E * E))
            rhs = float(np.sum(V * V)) * identity.frobenius_gap(B, A)
            worst = max(worst, lhs - rhs)
    return CheckResult(
        name="product-norm-transport",
        passed=bool(worst <= CERT_TOL),
        detail=f"{trials} instances, max(lhs - rhs)={_fmt(worst)}",
    )


def check_sivm_end_to_end(seed: int) -> CheckResult:
    """Greedy selection run on identity data matches its closed form.

    Chains selection, indicator mixing, and the inner solver; the residual
    must land within 1e-6 of (q - k)(k + 1)/k.
    """
    worst = 0.0
    cfg = SolverConfig()
    for q in (5, 10, 20):
        X = np.eye(q)
        for k in range(2, q):
            fact = sivm_factorization(X, k, cfg, seed)
            worst = max(worst, abs(fact.rss - identity.sivm_identity_error(q, k)))
    return CheckResult(
        name="sivm-end-to-end-identity",
        passed=bool(worst <= 1e-6),
        detail=f"q in (5, 10, 20), all k, max_abs_gap={_fmt(worst)}",
    )


def check_accuracy_curve(kmax: int = 50) -> CheckResult:
    """The accuracy ratio is exactly k/(k+1), increasing, below one,
    and crosses 90% just above k = 10."""
    ks = range(1, kmax + 1)
    ratios = [identity.relative_accuracy(k) for k in ks]
    exact = all(r == k / (k + 1) for k, r in zip(ks, ratios))
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    bounded = all(0.0 < r < 1.0 for r in ratios)
    boundary = identity.relative_accuracy(10) > 0.90 and identity.relative_accuracy(9) <= 0.90
    ok = exact and increasing and bounded and boundary
    return CheckResult(
        name="relative-accuracy-curve",
        passed=bool(ok),
        detail=f"k in [1, {kmax}], ratio(10)={identity.relative_accuracy(10):.6f}",
    )


def run_suite(
    qmax: int = 30, trials: int = 1000, seed: int = 0, break_one: bool = False
) -> list[CheckResult]:
    """The full certificate suite in a fixed, deterministic order."""
    if qmax < 2:
        raise ValueError(f"qmax must be >= 2, got {qmax}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    results = check_closed_forms(qmax, break_one=break_one)
    results.extend(check_random_sampling(trials, seed))
    results.append(check_product_transport(seed))
    results.append(check_sivm_end_to_end(seed))
    results.append(check_accuracy_curve())
    return results
