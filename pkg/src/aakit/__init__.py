"""Archetypal analysis toolkit.

Convexity-constrained matrix factorization (data approximated as convex
combinations of archetypes, archetypes as convex combinations of data),
greedy extreme-point selection as its fast approximation, exact 2-D hull
extraction, and a certificate engine that numerically verifies the exact
quality bounds these methods admit on identity-matrix instances.
"""

from .aa import AAConfig, fit_aa, fit_aa_on_vertices, nested_k_sweep, transform
from .hull import HullResult, convex_hull_2d, extremality_test
from .identity import (
    IdentityApproxCertificate,
    balanced_partition,
    centroid_rank1_factors,
    certify,
    frobenius_gap,
    partition_identity_factors,
    rank_lower_bound,
    relative_accuracy,
    sivm_identity_error,
    sivm_identity_factors,
    validate_partition,
    worst_case_bound,
)
from .io import (
    MatrixCsvError,
    RunReport,
    read_matrix_csv,
    write_matrix_csv,
    write_svg_hull_plot,
)
from .simplex import (
    project_to_simplex,
    simplex_centroid,
    simplex_height,
    vertex_to_subsimplex_distance,
)
from .sivm import SelectionResult, select_sivm, sivm_factorization
from .solver import SolverConfig, solve_simplex_ls, solve_simplex_ls_batch
from .types import (
    Factorization,
    ShapeError,
    frobenius_sq,
    is_column_stochastic,
    normalize_column,
    residual_sq,
)

__version__ = "0.1.0"

__all__ = [
    "AAConfig",
    "Factorization",
    "HullResult",
    "IdentityApproxCertificate",
    "MatrixCsvError",
    "RunReport",
    "SelectionResult",
    "ShapeError",
    "SolverConfig",
    "balanced_partition",
    "centroid_rank1_factors",
    "certify",
    "convex_hull_2d",
    "extremality_test",
    "fit_aa",
    "fit_aa_on_vertices",
    "frobenius_gap",
    "frobenius_sq",
    "is_column_stochastic",
    "nested_k_sweep",
    "normalize_column",
    "partition_identity_factors",
    "project_to_simplex",
    "rank_lower_bound",
    "read_matrix_csv",
    "relative_accuracy",
    "residual_sq",
    "select_sivm",
    "simplex_centroid",
    "simplex_height",
    "sivm_factorization",
    "sivm_identity_error",
    "sivm_identity_factors",
    "solve_simplex_ls",
    "solve_simplex_ls_batch",
    "transform",
    "validate_partition",
    "vertex_to_subsimplex_distance",
    "worst_case_bound",
    "write_matrix_csv",
    "write_svg_hull_plot",
]
