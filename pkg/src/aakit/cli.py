"""Command-line surface: factorize, sivm, bounds, demo, verify.

Exit codes: 0 success, 1 validation failure (bad flags, bad shapes),
2 runtime error (I/O), 3 certificate failure.  The environment variable
``AAK_THREADS`` (positive integer) caps internal parallelism by limiting
the BLAS thread pools; it defaults to the available cores.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_CERTIFICATE = 3


class CliError(Exception):
    """Validation failure carrying the intended exit code."""

    def __init__(self, message: str, code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _apply_thread_cap() -> None:
    raw = os.environ.get("AAK_THREADS")
    if raw is None:
        return
    try:
        threads = int(raw)
    except ValueError:
        raise CliError(f"AAK_THREADS must be a positive integer, got {raw!r}")
    if threads < 1:
        raise CliError(f"AAK_THREADS must be a positive integer, got {raw!r}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(threads))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aak", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_fact = sub.add_parser("factorize", help="alternating factorization of a CSV dataset")
    p_fact.add_argument("--input", required=True, help="points-as-rows CSV file")
    p_fact.add_argument("--k", type=int, required=True, help="number of archetypes")
    p_fact.add_argument("--seed", type=int, default=0)
    p_fact.add_argument("--init", choices=("sivm", "random", "uniform"), default="sivm")
    p_fact.add_argument("--max-iters", type=int, default=500)
    p_fact.add_argument("--tol", type=float, default=1e-6)
    p_fact.add_argument("--out-prefix", required=True, help="prefix for .B/.A/.Z/.report files")

    p_sivm = sub.add_parser("sivm", help="greedy extreme-point factorization")
    p_sivm.add_argument("--input", required=True)
    p_sivm.add_argument("--k", type=int, required=True)
    p_sivm.add_argument("--seed", type=int, default=0)
    p_sivm.add_argument("--out-prefix", required=True)

    p_bounds = sub.add_parser("bounds", help="closed-form quality bounds for given q, k")
    p_bounds.add_argument("--q", type=int, required=True)
    p_bounds.add_argument("--k", type=int, required=True)
    p_bounds.add_argument("--partition", help="comma-separated part sizes, e.g. 3,2,2")
    p_bounds.add_argument("--format", choices=("json", "table"), default="table")
    p_bounds.add_argument("--curve-csv", help="write the accuracy curve (k=1..50) as CSV")
    p_bounds.add_argument("--plot", help="render the accuracy curve figure (PNG)")

    p_demo = sub.add_parser("demo", help="synthetic 2-D hull-approximation demo")
    p_demo.add_argument("--shape", choices=("ring", "blob", "square"), required=True)
    p_demo.add_argument("--n", type=int, required=True)
    p_demo.add_argument("--k-range", required=True, help="inclusive range A..B")
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--svg", required=True, help="overlay SVG output path")
    p_demo.add_argument("--csv-prefix", help="also write data/archetype CSVs and a report")
    p_demo.add_argument("--plot", help="render the residual-vs-k figure (PNG)")

    p_verify = sub.add_parser("verify", help="run the full certificate suite")
    p_verify.add_argument("--qmax", type=int, default=30)
    p_verify.add_argument("--trials", type=int, default=1000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json", dest="json_path", help="write the machine report here")
    p_verify.add_argument(
        "--self-test-break", action="store_true", help=argparse.SUPPRESS
    )
    return parser


def _load_input(path):
    from . import io as aio

    try:
        return aio.read_matrix_csv(path)
    except FileNotFoundError as exc:
        raise CliError(str(exc), EXIT_RUNTIME)
    except aio.MatrixCsvError as exc:
        raise CliError(str(exc), EXIT_RUNTIME)


def _write_factor_files(X, fact, prefix, command, config, seed, timings, extra=None):
    from . import io as aio

    aio.write_matrix_csv(fact.B, f"{prefix}.B.csv", "raw-columns")
    aio.write_matrix_csv(fact.A, f"{prefix}.A.csv", "raw-columns")
    aio.write_matrix_csv(fact.Z, f"{prefix}.Z.csv", "points-as-rows")
    report = aio.RunReport(
        command=command,
        config=config,
        seed=seed,
        rss=fact.rss,
        rss_history=list(fact.rss_history),
        iterations=fact.iterations,
        converged=fact.converged,
        timings_ms=timings,
        selected_indices=extra,
    )
    aio.write_report_json(report, f"{prefix}.report.json")


def cmd_factorize(args) -> int:
    from .aa import AAConfig, fit_aa

    X = _load_input(args.input)
    if args.k < 1 or args.k > X.shape[1]:
        raise CliError(f"k={args.k} must satisfy 1 <= k <= n={X.shape[1]}")
    if args.max_iters < 1:
        raise CliError(f"--max-iters must be >= 1, got {args.max_iters}")
    if args.tol <= 0:
        raise CliError(f"--tol must be positive, got {args.tol}")
    cfg = AAConfig(
        k=args.k,
        max_outer_iters=args.max_iters,
        outer_tol=args.tol,
        init=args.init,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    fact = fit_aa(X, cfg)
    elapsed = (time.perf_counter() - t0) * 1000.0
    try:
        _write_factor_files(
            X,
            fact,
            args.out_prefix,
            "factorize",
            {
                "k": args.k,
                "max_iters": args.max_iters,
                "tol": args.tol,
                "init": args.init,
                "input": str(args.input),
                "inner": dataclasses.asdict(cfg.inner),
            },
            args.seed,
            {"fit": elapsed},
        )
    except OSError as exc:
        raise CliError(f"cannot write outputs: {exc}", EXIT_RUNTIME)
    print(f"rss={fact.rss:.12g} iterations={fact.iterations} converged={fact.converged}")
    return EXIT_OK


def cmd_sivm(args) -> int:
    from .sivm import sivm_factorization
    from .solver import SolverConfig

    X = _load_input(args.input)
    if args.k < 1 or args.k > X.shape[1]:
        raise CliError(f"k={args.k} must satisfy 1 <= k <= n={X.shape[1]}")
    t0 = time.perf_counter()
    fact = sivm_factorization(X, args.k, seed=args.seed)
    elapsed = (time.perf_counter() - t0) * 1000.0
    try:
        _write_factor_files(
            X,
            fact,
            args.out_prefix,
            "sivm",
            {
                "k": args.k,
                "input": str(args.input),
                "inner": dataclasses.asdict(SolverConfig()),
            },
            args.seed,
            {"fit": elapsed},
            extra=fact.meta["selected_indices"],
        )
    except OSError as exc:
        raise CliError(f"cannot write outputs: {exc}", EXIT_RUNTIME)
    indices = ",".join(str(i) for i in fact.meta["selected_indices"])
    print(f"rss={fact.rss:.12g} selected={indices}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    from . import identity

    if args.k < 1:
        raise CliError(f"--k must be >= 1, got {args.k}")
    if args.q < args.k:
        raise CliError(f"need k <= q, got k={args.k}, q={args.q}")
    if args.partition is not None:
        try:
            parts = identity.validate_partition(
                args.q, [int(p) for p in args.partition.split(",")]
            )
        except ValueError as exc:
            raise CliError(str(exc))
        if len(parts) != args.k:
            raise CliError(f"partition has {len(parts)} parts, expected k={args.k}")
    else:
        parts = identity.balanced_partition(args.q, args.k)

    certificates = [
        identity.certify(args.q, args.k, "sivm"),
        identity.certify(args.q, args.k, "partition", partition=parts),
    ]
    if args.k == 1:
        certificates.append(identity.certify(args.q, 1, "centroid"))

    curve = [(k, identity.relative_accuracy(k)) for k in range(1, 51)]
    payload = {
        "q": args.q,
        "k": args.k,
        "worst_case": identity.worst_case_bound(args.q),
        "sivm": identity.sivm_identity_error(args.q, args.k),
        "partition": float(args.q - args.k),
        "partition_parts": list(parts),
        "relative_accuracy": identity.relative_accuracy(args.k),
        "centroid": float(args.q - 1) if args.k == 1 else None,
        "certificates": [c.to_dict() for c in certificates],
        "relative_accuracy_curve": [{"k": k, "ratio": r} for k, r in curve],
    }

    if args.curve_csv:
        try:
            with open(args.curve_csv, "w", newline="\n") as fh:
                fh.write("k,ratio\n")
                for k, r in curve:
                    fh.write(f"{k},{r!r}\n")
        except OSError as exc:
            raise CliError(f"cannot write curve CSV: {exc}", EXIT_RUNTIME)
    if args.plot:
        from .plots import save_accuracy_curve

        try:
            save_accuracy_curve([k for k, _ in curve], [r for _, r in curve], args.plot)
        except OSError as exc:
            raise CliError(f"cannot write plot: {exc}", EXIT_RUNTIME)

    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"q={args.q} k={args.k}")
        print(f"  worst-case bound (any stochastic pair) : {payload['worst_case']:g}")
        print(f"  vertex placement (greedy selection)    : {payload['sivm']:g}")
        print(f"  partition placement (optimal)          : {payload['partition']:g}")
        if args.k == 1:
            print(f"  centroid rank-1                        : {payload['centroid']:g}")
        print(f"  relative accuracy k/(k+1)              : {payload['relative_accuracy']:.6f}")
        for cert in certificates:
            status = "pass" if cert.passed else "FAIL"
            print(
                f"  certificate {cert.kind:<9} predicted={cert.predicted_error:g} "
                f"measured={cert.measured_error:.12g} [{status}]"
            )
    if not all(c.passed for c in certificates):
        return EXIT_CERTIFICATE
    return EXIT_OK


def _parse_k_range(text: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise CliError(f"--k-range must look like A..B, got {text!r}")
    if lo < 1 or hi < lo:
        raise CliError(f"--k-range must satisfy 1 <= A <= B, got {text!r}")
    return lo, hi


def cmd_demo(args) -> int:
    import numpy as np

    from . import io as aio
    from .aa import AAConfig, nested_k_sweep
    from .datasets import make_shape
    from .hull import convex_hull_2d

    lo, hi = _parse_k_range(args.k_range)
    if args.n < 1:
        raise CliError(f"--n must be >= 1, got {args.n}")
    if hi > args.n:
        raise CliError(f"--k-range upper end {hi} exceeds n={args.n}")
    try:
        X = make_shape(args.shape, args.n, args.seed)
    except ValueError as exc:
        raise CliError(str(exc))

    hull = convex_hull_2d(X)
    hulls = [("data hull", X[:, list(hull.vertex_indices)])]

    ks = list(range(lo, hi + 1))
    sweep = nested_k_sweep(X, ks, AAConfig(k=lo, seed=args.seed))
    rows = []
    for k, fact in zip(ks, sweep):
        Z = np.asarray(fact.Z)
        zhull = convex_hull_2d(Z)
        hulls.append((f"k={k} archetypal hull", Z[:, list(zhull.vertex_indices)]))
        rows.append((k, fact.rss, fact.iterations, fact.converged))

    try:
        aio.write_svg_hull_plot(X, hulls, args.svg)
        if args.csv_prefix:
            aio.write_matrix_csv(X, f"{args.csv_prefix}.data.csv", "points-as-rows")
            for k, fact in zip(ks, sweep):
                aio.write_matrix_csv(
                    fact.Z, f"{args.csv_prefix}.Z.k{k}.csv", "points-as-rows"
                )
            report = aio.RunReport(
                command="demo",
                config={
                    "shape": args.shape,
                    "n": args.n,
                    "k_range": [lo, hi],
                    "hull_vertices": hull.q,
                },
                seed=args.seed,
                rss=rows[-1][1],
                rss_history=[r[1] for r in rows],
                iterations=sum(r[2] for r in rows),
                converged=all(r[3] for r in rows),
                timings_ms={},
            )
            aio.write_report_json(report, f"{args.csv_prefix}.report.json")
        if args.plot:
            from .plots import save_rss_curve

            save_rss_curve(ks, [r[1] for r in rows], args.plot)
    except OSError as exc:
        raise CliError(f"cannot write outputs: {exc}", EXIT_RUNTIME)

    print(f"shape={args.shape} n={args.n} data hull vertices: {hull.q}")
    print("k    rss             iterations  converged")
    for k, rss, iters, conv in rows:
        print(f"{k:<4d} {rss:<15.6e} {iters:<11d} {str(conv).lower()}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import run_suite

    if args.qmax < 2:
        raise CliError(f"--qmax must be >= 2, got {args.qmax}")
    if args.trials < 1:
        raise CliError(f"--trials must be >= 1, got {args.trials}")
    results = run_suite(
        qmax=args.qmax,
        trials=args.trials,
        seed=args.seed,
        break_one=args.self_test_break,
    )
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.name:<32} {res.detail}")
    n_pass = sum(1 for r in results if r.passed)
    all_pass = n_pass == len(results)
    print(f"RESULT: {'PASS' if all_pass else 'FAIL'} ({n_pass}/{len(results)} checks)")

    if args.json_path:
        payload = {
            "qmax": args.qmax,
            "trials": args.trials,
            "seed": args.seed,
            "pass": all_pass,
            "checks": [r.to_dict() for r in results],
            "certificates": [
                c.to_dict() for r in results for c in r.certificates
            ],
        }
        try:
            with open(args.json_path, "w", newline="\n") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise CliError(f"cannot write report: {exc}", EXIT_RUNTIME)
    return EXIT_OK if all_pass else EXIT_CERTIFICATE


_COMMANDS = {
    "factorize": cmd_factorize,
    "sivm": cmd_sivm,
    "bounds": cmd_bounds,
    "demo": cmd_demo,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        _apply_thread_cap()
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.subcommand](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SystemExit as exc:  # argparse --help and friends
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
