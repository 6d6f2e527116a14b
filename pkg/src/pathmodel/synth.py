"""Synthetic teaching and demonstration paths with seeded Gaussian noise.

Noise is drawn from numpy's PCG64 generator (``numpy.random.default_rng``),
so a given seed reproduces the same perturbations on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PathModelError

# The five shapes of the reference library.
BASIC_SHAPES = ("parabola", "rectangle", "quarter_circle", "spiral", "half_circle")
# Additional 3-D shapes standing in for paths traced along the edges of an object.
EXTRA_SHAPES = ("helix", "s_curve", "zigzag", "box_corner", "staircase")
SHAPES = BASIC_SHAPES + EXTRA_SHAPES

DEFAULT_NOISE_FRACTION = 0.02
DEFAULT_TEACHING_SETS = 8


@dataclass(frozen=True)
class ShapeSpec:
    """Shape kind, sample count and size parameters (arbitrary consistent units).

    Not every parameter applies to every kind: ``radius`` is used by the
    circular shapes, spiral and helix; ``width``/``height`` by rectangle,
    zigzag, box_corner and staircase; ``turns``/``pitch`` by spiral and
    helix; ``coefficient`` by the parabola (``y = coefficient * x**2`` on
    ``x in [-1, 1]``).
    """

    kind: str
    n_points: int = 200
    radius: float = 1.0
    width: float = 2.0
    height: float = 1.0
    turns: float = 2.0
    pitch: float = 0.0
    coefficient: float = 1.0

    def __post_init__(self):
        if self.kind not in SHAPES:
            raise PathModelError(f"unknown shape kind {self.kind!r}; expected one of {SHAPES}")
        if self.n_points < 2:
            raise PathModelError(f"n_points must be >= 2, got {self.n_points}")
        for attr in ("radius", "width", "height", "turns", "coefficient"):
            if not getattr(self, attr) > 0:
                raise PathModelError(f"{attr} must be > 0")
        if not (math.isfinite(self.pitch) and self.pitch >= 0):
            raise PathModelError("pitch must be finite and >= 0")


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise PathModelError(f"noise sigma must be finite and >= 0, got {self.sigma}")


def _along_polyline(corners, n: int) -> np.ndarray:
    """``n`` points evenly spaced by arc length along a corner polyline, ends included."""
    corners = np.asarray(corners, dtype=float)
    seg = np.linalg.norm(np.diff(corners, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    s = np.linspace(0.0, cum[-1], n)
    out = np.column_stack([np.interp(s, cum, corners[:, k]) for k in range(3)])
    # interp can be off by an ulp at the ends; the corners are exact.
    out[0], out[-1] = corners[0], corners[-1]
    return out


def gen_shape(spec: ShapeSpec) -> np.ndarray:
    """Sample a shape uniformly in its natural parameter. Deterministic."""
    n = spec.n_points
    kind = spec.kind
    zeros = np.zeros(n)
    if kind in ("half_circle", "quarter_circle"):
        sweep = math.pi if kind == "half_circle" else math.pi / 2
        t = np.linspace(0.0, sweep, n)
        pts = np.column_stack([spec.radius * np.cos(t), spec.radius * np.sin(t), zeros])
        # endpoints exactly on the arc (cos(pi) etc. are not exact)
        pts[0] = (spec.radius, 0.0, 0.0)
        pts[-1] = (-spec.radius, 0.0, 0.0) if kind == "half_circle" else (0.0, spec.radius, 0.0)
        return pts
    if kind == "parabola":
        x = np.linspace(-1.0, 1.0, n)
        return np.column_stack([x, spec.coefficient * x * x, zeros])
    if kind == "spiral":
        theta = np.linspace(0.0, 2 * math.pi * spec.turns, n)
        r = spec.radius * theta / theta[-1]
        return np.column_stack([r * np.cos(theta), r * np.sin(theta), spec.pitch * theta / (2 * math.pi)])
    if kind == "helix":
        theta = np.linspace(0.0, 2 * math.pi * spec.turns, n)
        pitch = spec.pitch if spec.pitch > 0 else spec.radius
        return np.column_stack(
            [spec.radius * np.cos(theta), spec.radius * np.sin(theta), pitch * theta / (2 * math.pi)]
        )
    if kind == "s_curve":
        t = np.linspace(0.0, 1.0, n)
        return np.column_stack([spec.width * t, spec.height * np.sin(2 * math.pi * t), 0.3 * spec.height * t * t])
    w, h = spec.width, spec.height
    if kind == "rectangle":
        corners = [(0, 0, 0), (w, 0, 0), (w, h, 0), (0, h, 0), (0, 0, 0)]
    elif kind == "zigzag":
        corners = [(0, 0, 0), (0.25 * w, h, 0), (0.5 * w, 0, 0), (0.75 * w, h, 0), (w, 0, 0)]
    elif kind == "box_corner":
        corners = [(0, 0, 0), (w, 0, 0), (w, 0, h), (w, 0.6 * w, h)]
    else:  # staircase
        corners = [(0, 0, 0), (0, 0, 0.25 * h), (0.25 * w, 0, 0.25 * h), (0.25 * w, 0, 0.6 * h),
                   (0.6 * w, 0, 0.6 * h), (0.6 * w, 0.2 * w, h)]
    return _along_polyline(corners, n)


def add_noise(points, noise: NoiseSpec) -> np.ndarray:
    """Add independent N(0, sigma^2) noise to every coordinate."""
    arr = np.array(points, dtype=float)
    if noise.sigma == 0:
        return arr
    rng = np.random.default_rng(noise.seed)
    return arr + rng.normal(0.0, noise.sigma, size=arr.shape)


def relative_sigma(points, fraction: float) -> float:
    """Noise sigma as a fraction of the bounding-box diagonal."""
    arr = np.asarray(points, dtype=float)
    return float(fraction * np.linalg.norm(arr.max(axis=0) - arr.min(axis=0)))


def teaching_sets(
    spec: ShapeSpec,
    count: int = DEFAULT_TEACHING_SETS,
    noise_fraction: float = DEFAULT_NOISE_FRACTION,
    seed: int = 0,
) -> list[np.ndarray]:
    """``count`` noisy copies of a shape; set ``i`` uses seed ``seed + i``."""
    clean = gen_shape(spec)
    sigma = relative_sigma(clean, noise_fraction)
    return [add_noise(clean, NoiseSpec(sigma, seed + i)) for i in range(count)]
