"""Similarity normalization of teaching sets and demonstrations.

A canonical path is centered on its centroid, scaled to unit total variance
and rotated into its principal axes, so only the shape survives. The
transform is kept as :class:`CanonicalParams` so it can be undone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, PathModelError
from .geom3 import Basis3, as_polyline, pca_basis


@dataclass(frozen=True, eq=False)
class CanonicalParams:
    """Invertible similarity transform ``q = scale * rotation @ (p - centroid)``.

    ``rotation`` has the principal axes as its rows.
    """

    centroid: np.ndarray
    rotation: np.ndarray
    scale: float

    def __post_init__(self):
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise PathModelError(f"scale must be positive and finite, got {self.scale}")

    def apply(self, points) -> np.ndarray:
        arr = np.asarray(points, dtype=float)
        return self.scale * (arr - self.centroid) @ self.rotation.T

    def invert(self, points) -> np.ndarray:
        arr = np.asarray(points, dtype=float)
        return arr @ self.rotation / self.scale + self.centroid


@dataclass(frozen=True, eq=False)
class CanonicalSet:
    points: np.ndarray
    params: CanonicalParams


def set_scale(centered: np.ndarray) -> float:
    """``1 / sqrt(sx^2 + sy^2 + sz^2)`` where ``s*`` are the principal standard deviations."""
    values = np.clip(np.linalg.eigvalsh(np.cov(centered, rowvar=False)), 0.0, None)
    sigmas = np.sqrt(values)
    total = float(sigmas @ sigmas)
    if total <= 0.0:
        raise DegenerateInputError("degenerate: zero covariance")
    return 1.0 / np.sqrt(total)


def canonicalize_group(sets) -> tuple[list[CanonicalSet], Basis3]:
    """Canonicalize several teaching sets of one path into a shared frame.

    The rotation comes from the pooled, per-set-centered points of all sets;
    each set keeps its own centroid and scale.
    """
    arrays = [as_polyline(s, min_points=2) for s in sets]
    if not arrays:
        raise PathModelError("no teaching sets given")
    centroids = [a.mean(axis=0) for a in arrays]
    centered = [a - c for a, c in zip(arrays, centroids)]

    scales = []
    for i, c in enumerate(centered):
        try:
            scales.append(set_scale(c))
        except DegenerateInputError:
            raise DegenerateInputError(f"degenerate teaching set {i}: zero covariance") from None

    basis = pca_basis(np.vstack(centered))
    rotation = basis.axes.T
    out = []
    for c, cen, s in zip(centered, centroids, scales):
        params = CanonicalParams(centroid=cen, rotation=rotation, scale=s)
        out.append(CanonicalSet(points=s * c @ rotation.T, params=params))
    return out, basis


def canonicalize_single(demo) -> CanonicalSet:
    """Canonicalize one demonstration in its own principal frame."""
    sets, _ = canonicalize_group([demo])
    return sets[0]


def decanonicalize(points, params: CanonicalParams) -> np.ndarray:
    """Map canonical points back: revert orientation, then scale, then centering."""
    if not params.scale > 0:
        raise PathModelError(f"scale must be positive, got {params.scale}")
    return params.invert(as_polyline(points))
