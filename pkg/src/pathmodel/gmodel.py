"""Gaussian path models built from teaching sets, and their library variants."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .canonical import canonicalize_group
from .decimate import Keypoints, rdp, vw
from .errors import InsufficientDataError, PathModelError, SingularCovarianceError
from .geom3 import gaussian_smooth

REGULARIZATION = 1e-9
MIN_TEACHING_SETS = 4
DEFAULT_FILTER_SIGMA = 2.0

FLIP_AXES = ("none", "x", "y", "z")

# 180 degree rotations about each coordinate axis; with the identity they
# form a group, so composed flips need no extra variants.
FLIP_ROTATIONS = {
    "none": np.eye(3),
    "x": np.diag([1.0, -1.0, -1.0]),
    "y": np.diag([-1.0, 1.0, -1.0]),
    "z": np.diag([-1.0, -1.0, 1.0]),
}


@dataclass(frozen=True)
class Variant:
    flip_axis: str = "none"
    reversed: bool = False

    def __post_init__(self):
        if self.flip_axis not in FLIP_AXES:
            raise PathModelError(f"unknown flip axis {self.flip_axis!r}")

    @property
    def is_base(self) -> bool:
        return self.flip_axis == "none" and not self.reversed

    def __str__(self) -> str:
        return f"{self.flip_axis}{'-rev' if self.reversed else ''}"


@dataclass(frozen=True, eq=False)
class KeypointGaussian:
    mu: np.ndarray
    sigma: np.ndarray


@dataclass(frozen=True, eq=False)
class GaussianPathModel:
    """Ordered keypoint Gaussians of one path, in the canonical frame.

    ``means`` is ``(n, 3)`` and ``covariances`` is ``(n, 3, 3)``.
    """

    name: str
    means: np.ndarray
    covariances: np.ndarray
    variant: Variant = field(default_factory=Variant)
    rdp_epsilon: float = float("nan")
    teaching_set_count: int = 0

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float)
        covs = np.asarray(self.covariances, dtype=float)
        if means.ndim != 2 or means.shape[1] != 3:
            raise PathModelError(f"means must be (n, 3), got {means.shape}")
        if covs.shape != (len(means), 3, 3):
            raise PathModelError(f"covariances must be ({len(means)}, 3, 3), got {covs.shape}")
        if len(means) < 2:
            raise InsufficientDataError("a path model needs at least 2 keypoints")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "covariances", covs)

    @property
    def keypoint_count(self) -> int:
        return len(self.means)

    @property
    def keypoints(self) -> list[KeypointGaussian]:
        return [KeypointGaussian(m, s) for m, s in zip(self.means, self.covariances)]

    @cached_property
    def _factors(self) -> tuple[np.ndarray, np.ndarray]:
        """Inverse Cholesky factors and log-determinants of all covariances."""
        try:
            chol = np.linalg.cholesky(self.covariances)
        except np.linalg.LinAlgError:
            raise SingularCovarianceError(f"singular covariance in model {self.name!r}") from None
        inv_chol = np.linalg.inv(chol)
        logdet = 2.0 * np.log(np.diagonal(chol, axis1=1, axis2=2)).sum(axis=1)
        return inv_chol, logdet


def teaching_keypoints(sets, epsilon: float, filter_sigma: float = DEFAULT_FILTER_SIGMA):
    """Canonicalize, smooth and decimate teaching sets to a common keypoint count.

    The count is taken from RDP on the first set; every set is then reduced
    to that count with VW. Returns the list of :class:`Keypoints`.
    """
    canon, _ = canonicalize_group(sets)
    smoothed = [gaussian_smooth(c.points, filter_sigma) for c in canon]
    count = len(rdp(smoothed[0], epsilon))
    shortest = min(len(s) for s in smoothed)
    if count > shortest:
        raise InsufficientDataError(
            f"keypoint count {count} exceeds the shortest teaching set ({shortest} points)"
        )
    return [vw(s, count) for s in smoothed]


def keypoint_stats(keypoint_sets, index: int, regularization: float = REGULARIZATION) -> KeypointGaussian:
    """Mean and sample covariance (divisor n-1) of keypoint ``index`` across sets."""
    pts = _stack_keypoints(keypoint_sets)[:, index, :]
    return KeypointGaussian(mu=pts.mean(axis=0), sigma=_covariance(pts, regularization))


def _stack_keypoints(keypoint_sets) -> np.ndarray:
    arrays = [np.asarray(k.points if isinstance(k, Keypoints) else k, dtype=float) for k in keypoint_sets]
    if len(arrays) < 2:
        raise InsufficientDataError("keypoint statistics need at least 2 sets")
    lengths = {len(a) for a in arrays}
    if len(lengths) != 1:
        raise PathModelError(f"keypoint sets have mismatched lengths {sorted(lengths)}")
    return np.stack(arrays)


def _covariance(pts: np.ndarray, regularization: float) -> np.ndarray:
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / (len(pts) - 1)
    cov = 0.5 * (cov + cov.T)
    return cov + regularization * np.eye(3)


def build_model(
    sets,
    epsilon: float,
    filter_sigma: float = DEFAULT_FILTER_SIGMA,
    name: str = "path",
    regularization: float = REGULARIZATION,
) -> GaussianPathModel:
    """Build a Gaussian path model from at least four teaching sets."""
    sets = list(sets)
    if len(sets) < MIN_TEACHING_SETS:
        raise InsufficientDataError(
            f"insufficient teaching sets (need >= {MIN_TEACHING_SETS} for rank-3 covariances), got {len(sets)}"
        )
    stacked = _stack_keypoints(teaching_keypoints(sets, epsilon, filter_sigma))
    means = stacked.mean(axis=0)
    covs = np.stack([_covariance(stacked[:, i, :], regularization) for i in range(stacked.shape[1])])
    return GaussianPathModel(
        name=name,
        means=means,
        covariances=covs,
        rdp_epsilon=float(epsilon),
        teaching_set_count=len(sets),
    )


def make_variant(model: GaussianPathModel, flip_axis: str, reversed_: bool) -> GaussianPathModel:
    rot = FLIP_ROTATIONS[flip_axis]
    means = model.means @ rot.T
    covs = rot @ model.covariances @ rot.T
    if reversed_:
        means = means[::-1].copy()
        covs = covs[::-1].copy()
    return replace(model, means=means, covariances=covs, variant=Variant(flip_axis, reversed_))


def make_variants(model: GaussianPathModel) -> list[GaussianPathModel]:
    """All 8 flip/direction variants of a base model; the base model comes first."""
    if not model.variant.is_base:
        raise PathModelError(f"model {model.name!r} is already a variant ({model.variant})")
    return [make_variant(model, axis, rev) for rev in (False, True) for axis in FLIP_AXES]


@dataclass(frozen=True, eq=False)
class ModelLibrary:
    """Named base models plus the filter sigma used to build them.

    ``candidates`` lists every variant of every model in insertion order;
    variants are derived, never stored.
    """

    models: tuple[GaussianPathModel, ...]
    filter_sigma: float = DEFAULT_FILTER_SIGMA

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise PathModelError("empty library")
        names = [m.name for m in models]
        if len(set(names)) != len(names):
            raise PathModelError(f"duplicate model names in library: {names}")
        object.__setattr__(self, "models", models)

    @cached_property
    def candidates(self) -> tuple[GaussianPathModel, ...]:
        return tuple(v for m in self.models for v in make_variants(m))

    @property
    def names(self) -> list[str]:
        return [m.name for m in self.models]

    def __getitem__(self, name: str) -> GaussianPathModel:
        for m in self.models:
            if m.name == name:
                return m
        raise KeyError(name)

    def __len__(self) -> int:
        return len(self.models)
