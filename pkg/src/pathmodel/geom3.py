"""3-D point and polyline primitives.

Polylines are plain ``(n, 3)`` float arrays. Everything here is a pure
function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InsufficientDataError, PathModelError

# Eigenvalues below this fraction of the largest one are treated as zero.
_ZERO_EIGENVALUE_RTOL = 1e-10


def as_polyline(points, min_points: int = 1) -> np.ndarray:
    """Validate ``points`` and return them as a float ``(n, 3)`` array (a copy)."""
    arr = np.array(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise PathModelError(f"expected an (n, 3) array of points, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InsufficientDataError("empty polyline")
    if arr.shape[0] < min_points:
        raise InsufficientDataError(
            f"polyline has {arr.shape[0]} points, need at least {min_points}"
        )
    if not np.all(np.isfinite(arr)):
        raise PathModelError("polyline contains non-finite coordinates")
    return arr


def centroid(points) -> np.ndarray:
    """Arithmetic mean of the points, per component."""
    arr = as_polyline(points)
    return arr.mean(axis=0)


@dataclass(frozen=True, eq=False)
class Basis3:
    """Right-handed orthonormal principal axes.

    ``axes[:, i]`` is the i-th principal direction and ``eigenvalues[i]`` the
    sample variance along it, in descending order.
    """

    axes: np.ndarray
    eigenvalues: np.ndarray


def sample_covariance(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    centered = arr - arr.mean(axis=0)
    return centered.T @ centered / (arr.shape[0] - 1)


def _orient(vec: np.ndarray) -> np.ndarray:
    # Largest-magnitude component positive; argmax picks the first on ties.
    k = int(np.argmax(np.abs(vec)))
    return -vec if vec[k] < 0 else vec


def _complete_axis(first: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to ``first``."""
    k = int(np.argmin(np.abs(first)))
    e = np.zeros(3)
    e[k] = 1.0
    v = e - (e @ first) * first
    return v / np.linalg.norm(v)


def pca_basis(points) -> Basis3:
    """Principal axes of a point set (sample covariance, divisor n-1).

    The points are centered internally. Each axis is flipped so that its
    largest-magnitude component is positive; if the result is left-handed
    the third axis is negated. Directions with zero variance (collinear or
    planar input) are filled in by a deterministic orthonormal completion.
    """
    arr = as_polyline(points, min_points=2)
    cov = sample_covariance(arr)
    values, vectors = np.linalg.eigh(cov)
    order = np.argsort(values)[::-1]
    values = np.clip(values[order], 0.0, None)
    vectors = vectors[:, order]
    if values[0] <= 0.0:
        raise DegenerateInputError("degenerate: zero covariance")

    zero = values <= _ZERO_EIGENVALUE_RTOL * values[0]
    e1 = _orient(vectors[:, 0])
    if zero[1]:
        e2 = _complete_axis(e1)
        values[1:] = 0.0
    else:
        e2 = _orient(vectors[:, 1])
    if zero[2]:
        e3 = np.cross(e1, e2)
        values[2] = 0.0
    else:
        e3 = _orient(vectors[:, 2])
    axes = np.column_stack([e1, e2, e3])
    if np.linalg.det(axes) < 0:
        axes[:, 2] = -axes[:, 2]
    return Basis3(axes=axes, eigenvalues=values)


def point_segment_distance(p, a, b) -> float:
    """Euclidean distance from ``p`` to the closed segment ``ab``."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = ab @ ab
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(1.0, max(0.0, ((p - a) @ ab) / denom))
    return float(np.linalg.norm(p - (a + t * ab)))


def segment_distances(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized :func:`point_segment_distance` for an ``(n, 3)`` array."""
    ab = b - a
    denom = ab @ ab
    if denom == 0.0:
        return np.linalg.norm(points - a, axis=1)
    t = np.clip(((points - a) @ ab) / denom, 0.0, 1.0)
    return np.linalg.norm(points - (a + t[:, None] * ab), axis=1)


def projection_parameter(p, a, b) -> float:
    """Unclamped parameter ``t`` of the projection of ``p`` on the line through ``a`` and ``b``.

    ``t`` is 0 at ``a`` and 1 at ``b``. A degenerate segment returns 0.
    """
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    ab = np.asarray(b, dtype=float) - a
    denom = ab @ ab
    if denom == 0.0:
        return 0.0
    return float(((p - a) @ ab) / denom)


def triangle_area(a, b, c) -> float:
    """Area of the triangle ``abc``: half the norm of ``(b - a) x (c - a)``."""
    ax, ay, az = a[0], a[1], a[2]
    ux, uy, uz = b[0] - ax, b[1] - ay, b[2] - az
    vx, vy, vz = c[0] - ax, c[1] - ay, c[2] - az
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    return 0.5 * math.sqrt(cx * cx + cy * cy + cz * cz)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized Gaussian kernel truncated at radius ``ceil(3 * sigma)``."""
    if sigma < 0:
        raise PathModelError(f"filter sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return np.ones(1)
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=float)
    kernel = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_smooth(points, sigma: float = 2.0) -> np.ndarray:
    """Smooth each coordinate with a truncated Gaussian kernel.

    ``sigma`` is measured in samples. Boundaries are handled by mirror
    reflection including the edge sample (``d c b a | a b c d``), and the
    output has as many points as the input.
    """
    arr = as_polyline(points)
    kernel = gaussian_kernel(sigma)
    if kernel.size == 1:
        return arr
    radius = kernel.size // 2
    padded = np.pad(arr, ((radius, radius), (0, 0)), mode="symmetric")
    out = np.empty_like(arr)
    for k in range(3):
        out[:, k] = np.convolve(padded[:, k], kernel, mode="valid")
    return out
