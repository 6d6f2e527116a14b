"""Splicing a demonstrated correction into a recognized model's keypoints."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalParams, decanonicalize
from .decimate import Keypoints, rdp
from .errors import CorrectionRangeError, InsufficientDataError
from .geom3 import as_polyline, projection_parameter
from .gmodel import GaussianPathModel


@dataclass(frozen=True, eq=False)
class CorrectionResult:
    corrected: np.ndarray
    # inclusive index range of replaced model keypoints
    redundant_range: tuple[int, int]
    correction_keypoints: Keypoints


def _closest(kps: np.ndarray, p: np.ndarray) -> int:
    # argmin returns the lowest index on ties
    return int(np.argmin(np.linalg.norm(kps - p, axis=1)))


def _inside(kps: np.ndarray, c: int, p: np.ndarray) -> bool:
    t = projection_parameter(p, kps[c], kps[c + 1])
    return 0.0 < t < 1.0


def locate_redundant_range(model_kps, first_corr, last_corr) -> tuple[int, int]:
    """Inclusive range of model keypoints that a correction replaces.

    Each correction endpoint is matched to its closest model keypoint ``c``.
    Endpoint matches step one keypoint inwards. Otherwise the correction
    point is projected on the segment from ``c`` to ``c + 1``: a projection
    strictly inside the segment means the correction starts after ``c``
    (first endpoint) or ends at ``c`` (last endpoint).
    """
    kps = as_polyline(model_kps, min_points=2)
    first_corr = np.asarray(first_corr, dtype=float)
    last_corr = np.asarray(last_corr, dtype=float)
    if not (np.all(np.isfinite(first_corr)) and np.all(np.isfinite(last_corr))):
        raise CorrectionRangeError("correction endpoints must be finite")
    n = len(kps)

    c = _closest(kps, first_corr)
    if c == 0:
        first = 1
    elif c == n - 1:
        first = c - 1
    else:
        first = c + 1 if _inside(kps, c, first_corr) else c

    c = _closest(kps, last_corr)
    if c == 0:
        last = 1
    elif c == n - 1:
        last = c - 1
    else:
        last = c if _inside(kps, c, last_corr) else c - 1

    if first > last:
        first, last = last, first
    if first < 0 or last >= n:
        raise CorrectionRangeError(f"correction outside model extent (range {first}..{last}, {n} keypoints)")
    return first, last


def splice(model_kps, correction_kps, redundant_range) -> np.ndarray:
    first, last = redundant_range
    kps = np.asarray(model_kps, dtype=float)
    return np.vstack([kps[:first], np.asarray(correction_kps, dtype=float), kps[last + 1 :]])


def correct_path(
    model: GaussianPathModel,
    correction,
    rdp_epsilon: float,
    demo_params: CanonicalParams,
) -> CorrectionResult:
    """Replace the redundant part of ``model``'s keypoint path with a correction.

    The model means are first mapped into the demonstration's frame with
    ``demo_params``; ``correction`` must be given in that same frame and is
    decimated with RDP before splicing. The result stays in that frame.
    """
    correction = as_polyline(correction)
    if len(correction) < 2:
        raise InsufficientDataError("correction needs at least 2 points")
    model_kps = decanonicalize(model.means, demo_params)
    corr = rdp(correction, rdp_epsilon)
    rng = locate_redundant_range(model_kps, corr.points[0], corr.points[-1])
    return CorrectionResult(
        corrected=splice(model_kps, corr.points, rng),
        redundant_range=rng,
        correction_keypoints=corr,
    )
