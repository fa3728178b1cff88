"""Synthetic 2-D point clouds for the demo pipeline.

Three regimes of hull complexity: ``ring`` has many hull vertices, ``square``
has exactly four (present in the data as exact corners), ``blob`` lets the
vertex count emerge from Gaussian sampling.
"""

from __future__ import annotations

import numpy as np

SHAPES = ("ring", "square", "blob")


def make_ring(n: int, seed: int = 0) -> np.ndarray:
    """Points on the unit circle with small radial jitter, 2 x n."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    radius = 1.0 + rng.uniform(-0.02, 0.02, size=n)
    return np.vstack([radius * np.cos(theta), radius * np.sin(theta)])


def make_square(n: int, seed: int = 0) -> np.ndarray:
    """Four exact corners of [-1, 1]^2 plus n - 4 uniform interior points."""
    if n < 4:
        raise ValueError(f"square needs n >= 4 points, got n={n}")
    rng = np.random.default_rng(seed)
    corners = np.array([[-1.0, 1.0, 1.0, -1.0], [-1.0, -1.0, 1.0, 1.0]])
    interior = rng.uniform(-0.98, 0.98, size=(2, n - 4))
    return np.hstack([corners, interior])


def make_blob(n: int, seed: int = 0) -> np.ndarray:
    """Isotropic Gaussian cloud, 2 x n."""
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, 1.0, size=(2, n))


def make_shape(shape: str, n: int, seed: int = 0) -> np.ndarray:
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}, expected one of {SHAPES}")
    if n < 1:
        raise ValueError(f"need n >= 1 points, got n={n}")
    if shape == "ring":
        return make_ring(n, seed)
    if shape == "square":
        return make_square(n, seed)
    return make_blob(n, seed)


def hexagon_with_interior(n_interior: int = 200, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Six well-separated hull vertices plus interior points, 2 x (6 + n).

    Returns (points, vertex_positions); the vertices occupy the first six
    columns.  Interior points stay within half the circumradius, keeping
    the vertices unambiguous extremes.
    """
    rng = np.random.default_rng(seed)
    angles = np.pi / 6.0 + np.linspace(0.0, 2.0 * np.pi, 6, endpoint=False)
    vertices = np.vstack([np.cos(angles), np.sin(angles)])
    radius = 0.5 * np.sqrt(rng.uniform(0.0, 1.0, size=n_interior))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n_interior)
    interior = np.vstack([radius * np.cos(theta), radius * np.sin(theta)])
    return np.hstack([vertices, interior]), vertices
